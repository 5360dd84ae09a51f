#pragma once

#include "error.hpp"
#include "rational.hpp"

#include <algorithm>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ptsm
{

/// Dense 0-based index of a state within its owning system.
using StateId = std::size_t;

/// Discrete probability distribution over successor states.
///
/// Entries are sorted by state, every weight is strictly positive and the
/// weights sum to exactly one. Instances only come out of validation.
class Distribution
{
public:
    struct Entry
    {
        StateId state;
        Rational weight;

        friend bool operator==( const Entry&, const Entry& ) = default;
    };

private:
    std::vector<Entry> _entries;

    explicit Distribution( std::vector<Entry> entries ) : _entries( std::move( entries ) ) {}

    friend class TransitionSystem;

public:
    Distribution() = default;

    // Checked construction; see validate_system for the error codes.
    static Distribution make( std::vector<Entry> entries )
    {
        std::sort( entries.begin(), entries.end(),
                   []( const Entry& x, const Entry& y ) { return x.state < y.state; } );
        Rational sum;
        for ( std::size_t i = 0; i < entries.size(); ++i )
        {
            if ( i > 0 && entries[ i ].state == entries[ i - 1 ].state )
                fail( ErrorCode::parameter, "duplicate successor " + std::to_string( entries[ i ].state ) );
            if ( entries[ i ].weight.sign() <= 0 || entries[ i ].weight > Rational( 1 ) )
                fail( ErrorCode::range, "successor weight " + entries[ i ].weight.str() + " outside (0,1]" );
            sum += entries[ i ].weight;
        }
        if ( sum != Rational( 1 ) )
            fail( ErrorCode::weight_sum, "successor weights sum to " + sum.str() );
        return Distribution( std::move( entries ) );
    }

    std::span<const Entry> entries() const noexcept { return _entries; }
    std::size_t size() const noexcept { return _entries.size(); }
    auto begin() const noexcept { return _entries.begin(); }
    auto end() const noexcept { return _entries.end(); }

    Rational weight( StateId s ) const
    {
        auto it = std::lower_bound( _entries.begin(), _entries.end(), s,
                                    []( const Entry& e, StateId v ) { return e.state < v; } );
        return it != _entries.end() && it->state == s ? it->weight : Rational( 0 );
    }

    std::vector<StateId> support() const
    {
        std::vector<StateId> out;
        out.reserve( _entries.size() );
        for ( const auto& e : _entries )
            out.push_back( e.state );
        return out;
    }

    friend bool operator==( const Distribution&, const Distribution& ) = default;
};

/// Successor structure of one state: a distribution, or nullopt for a
/// terminating state (total outgoing weight zero).
using Successors = std::optional<Distribution>;

/// Untrusted description of a system, as read from a file or built by hand.
struct RawSystem
{
    struct State
    {
        std::string label;
        std::vector<Rational> valuation; // one entry per atom, same order as `atoms`
        std::optional<std::vector<std::pair<StateId, Rational>>> successors;
    };

    std::vector<std::string> atoms;
    std::vector<State> states;

    StateId add_state( std::string label, std::vector<Rational> valuation = {} )
    {
        if ( valuation.empty() )
            valuation.assign( atoms.size(), Rational( 0 ) );
        states.push_back( { std::move( label ), std::move( valuation ), std::nullopt } );
        return states.size() - 1;
    }

    void add_edge( StateId from, StateId to, Rational weight )
    {
        auto& succ = states.at( from ).successors;
        if ( !succ )
            succ.emplace();
        succ->emplace_back( to, std::move( weight ) );
    }
};

/// Finite probabilistic transition system: per-atom truth degrees in [0,1]
/// and, per state, a successor distribution or termination. Immutable once
/// built; the only way in is validate_system.
class TransitionSystem
{
    std::vector<std::string> _atoms;
    std::vector<std::string> _labels;
    std::vector<std::vector<Rational>> _valuation; // [state][atom]
    std::vector<Successors> _successors;
    std::unordered_map<std::string, StateId> _by_label;

    TransitionSystem() = default;

    friend TransitionSystem validate_system( const RawSystem& raw );

public:
    std::size_t state_count() const noexcept { return _successors.size(); }
    const std::vector<std::string>& atoms() const noexcept { return _atoms; }

    std::optional<std::size_t> atom_index( std::string_view name ) const
    {
        for ( std::size_t i = 0; i < _atoms.size(); ++i )
            if ( _atoms[ i ] == name )
                return i;
        return std::nullopt;
    }

    const Rational& value( StateId s, std::size_t atom ) const { return _valuation.at( s ).at( atom ); }
    std::span<const Rational> valuation( StateId s ) const { return _valuation.at( s ); }

    const Successors& successors( StateId s ) const { return _successors.at( s ); }
    bool is_terminating( StateId s ) const { return !_successors.at( s ).has_value(); }

    Rational transition( StateId from, StateId to ) const
    {
        const auto& succ = successors( from );
        return succ ? succ->weight( to ) : Rational( 0 );
    }

    const std::string& label( StateId s ) const { return _labels.at( s ); }

    std::optional<StateId> find_state( std::string_view label ) const
    {
        auto it = _by_label.find( std::string( label ) );
        if ( it == _by_label.end() )
            return std::nullopt;
        return it->second;
    }

    StateId state( std::string_view label ) const
    {
        if ( auto s = find_state( label ) )
            return *s;
        fail( ErrorCode::dangling_state, "no state labelled '" + std::string( label ) + "'" );
    }

    void check_state( StateId s ) const
    {
        if ( s >= state_count() )
            fail( ErrorCode::dangling_state, "state id " + std::to_string( s ) + " out of range" );
    }

    RawSystem to_raw() const
    {
        RawSystem raw;
        raw.atoms = _atoms;
        for ( StateId s = 0; s < state_count(); ++s )
        {
            raw.states.push_back( { _labels[ s ], _valuation[ s ], std::nullopt } );
            if ( const auto& succ = _successors[ s ] )
            {
                raw.states.back().successors.emplace();
                for ( const auto& e : *succ )
                    raw.states.back().successors->emplace_back( e.state, e.weight );
            }
        }
        return raw;
    }

    friend bool operator==( const TransitionSystem& a, const TransitionSystem& b )
    {
        return a._atoms == b._atoms && a._labels == b._labels && a._valuation == b._valuation
               && a._successors == b._successors;
    }
};

/// Checks every system invariant exactly and returns the immutable system.
///
/// Errors: WeightSumError when a state's outgoing weights sum to neither 0
/// nor 1; RangeError for valuations or weights outside [0,1]; DanglingState
/// for edges to unknown ids; ParameterError for malformed headers.
inline TransitionSystem validate_system( const RawSystem& raw )
{
    if ( raw.states.empty() )
        fail( ErrorCode::parameter, "system has no states" );
    {
        std::set<std::string> seen;
        for ( const auto& a : raw.atoms )
            if ( a.empty() || !seen.insert( a ).second )
                fail( ErrorCode::parameter, "empty or duplicate atom name '" + a + "'" );
    }

    TransitionSystem sys;
    sys._atoms = raw.atoms;
    const std::size_t n = raw.states.size();
    for ( StateId s = 0; s < n; ++s )
    {
        const auto& st = raw.states[ s ];
        std::string label = st.label.empty() ? "s" + std::to_string( s ) : st.label;
        if ( !sys._by_label.emplace( label, s ).second )
            fail( ErrorCode::parameter, "duplicate state label '" + label + "'" );
        sys._labels.push_back( label );

        if ( st.valuation.size() != raw.atoms.size() )
            fail( ErrorCode::parameter, "state '" + label + "' has " + std::to_string( st.valuation.size() )
                                            + " atom values, expected " + std::to_string( raw.atoms.size() ) );
        for ( std::size_t p = 0; p < st.valuation.size(); ++p )
            if ( !in_unit_interval( st.valuation[ p ] ) )
                fail( ErrorCode::range, "valuation " + raw.atoms[ p ] + "(" + label + ") = " + st.valuation[ p ].str()
                                            + " outside [0,1]" );
        sys._valuation.push_back( st.valuation );

        if ( !st.successors || st.successors->empty() )
        {
            sys._successors.emplace_back( std::nullopt );
            continue;
        }
        std::vector<Distribution::Entry> entries;
        Rational sum;
        std::set<StateId> targets;
        for ( const auto& [ to, w ] : *st.successors )
        {
            if ( to >= n )
                fail( ErrorCode::dangling_state, "edge from '" + label + "' to unknown state " + std::to_string( to ) );
            if ( w.sign() < 0 || w > Rational( 1 ) )
                fail( ErrorCode::range, "weight " + w.str() + " on edge from '" + label + "' outside [0,1]" );
            if ( !targets.insert( to ).second )
                fail( ErrorCode::parameter, "duplicate edge from '" + label + "' to state " + std::to_string( to ) );
            sum += w;
            if ( w.sign() > 0 )
                entries.push_back( { to, w } );
        }
        if ( sum.is_zero() )
            sys._successors.emplace_back( std::nullopt );
        else if ( sum == Rational( 1 ) )
            sys._successors.emplace_back( Distribution::make( std::move( entries ) ) );
        else
            fail( ErrorCode::weight_sum, "weights out of '" + label + "' sum to " + sum.str() + ", not 0 or 1" );
    }
    return sys;
}

inline void require_same_atoms( const TransitionSystem& a, const TransitionSystem& b )
{
    if ( a.atoms() != b.atoms() )
        fail( ErrorCode::atom_mismatch, "systems declare different atom headers" );
}

// ---------------------------------------------------------------------------
// Disjoint union

struct UnionResult
{
    TransitionSystem system;
    std::vector<StateId> offsets; // part i's state s lives at offsets[i] + s
};

/// Places the parts side by side with no cross-part transitions. With more
/// than one part, labels become "label@i" to stay unique.
inline UnionResult disjoint_union( std::span<const TransitionSystem* const> parts )
{
    if ( parts.empty() )
        fail( ErrorCode::parameter, "disjoint union of zero systems" );
    for ( const auto* p : parts )
        require_same_atoms( *parts.front(), *p );

    RawSystem raw;
    raw.atoms = parts.front()->atoms();
    std::vector<StateId> offsets;
    const bool rename = parts.size() > 1;
    for ( std::size_t i = 0; i < parts.size(); ++i )
    {
        const auto& part = *parts[ i ];
        const StateId offset = raw.states.size();
        offsets.push_back( offset );
        for ( StateId s = 0; s < part.state_count(); ++s )
        {
            auto v = part.valuation( s );
            raw.add_state( rename ? part.label( s ) + "@" + std::to_string( i ) : part.label( s ),
                           std::vector<Rational>( v.begin(), v.end() ) );
            if ( const auto& succ = part.successors( s ) )
                for ( const auto& e : *succ )
                    raw.add_edge( offset + s, offset + e.state, e.weight );
        }
    }
    return { validate_system( raw ), std::move( offsets ) };
}

inline UnionResult disjoint_union( std::initializer_list<const TransitionSystem*> parts )
{
    return disjoint_union( std::span<const TransitionSystem* const>( parts.begin(), parts.size() ) );
}

// ---------------------------------------------------------------------------
// Gaifman graph

/// Undirected adjacency with an edge wherever a transition has positive weight.
inline std::vector<std::vector<StateId>> gaifman_graph( const TransitionSystem& sys )
{
    std::vector<std::set<StateId>> adj( sys.state_count() );
    for ( StateId s = 0; s < sys.state_count(); ++s )
        if ( const auto& succ = sys.successors( s ) )
            for ( const auto& e : *succ )
            {
                adj[ s ].insert( e.state );
                adj[ e.state ].insert( s );
            }
    std::vector<std::vector<StateId>> out;
    out.reserve( adj.size() );
    for ( auto& a : adj )
        out.emplace_back( a.begin(), a.end() );
    return out;
}

/// Multi-source BFS; nullopt marks unreachable states.
inline std::vector<std::optional<std::size_t>> gaifman_distances( const TransitionSystem& sys,
                                                                  std::span<const StateId> sources )
{
    auto adj = gaifman_graph( sys );
    std::vector<std::optional<std::size_t>> dist( sys.state_count() );
    std::deque<StateId> queue;
    for ( StateId s : sources )
    {
        sys.check_state( s );
        if ( !dist[ s ] )
        {
            dist[ s ] = 0;
            queue.push_back( s );
        }
    }
    while ( !queue.empty() )
    {
        StateId s = queue.front();
        queue.pop_front();
        for ( StateId t : adj[ s ] )
            if ( !dist[ t ] )
            {
                dist[ t ] = *dist[ s ] + 1;
                queue.push_back( t );
            }
    }
    return dist;
}

/// Shortest-path length in the Gaifman graph; nullopt means infinity.
inline std::optional<std::size_t> gaifman_distance( const TransitionSystem& sys, StateId a, StateId b )
{
    sys.check_state( b );
    StateId src[] = { a };
    return gaifman_distances( sys, src )[ b ];
}

/// States within Gaifman distance k of at least one center.
inline std::set<StateId> neighborhood( const TransitionSystem& sys, std::span<const StateId> centers, std::size_t k )
{
    auto dist = gaifman_distances( sys, centers );
    std::set<StateId> out;
    for ( StateId s = 0; s < dist.size(); ++s )
        if ( dist[ s ] && *dist[ s ] <= k )
            out.insert( s );
    return out;
}

// ---------------------------------------------------------------------------
// Restriction and unravelling

struct Embedding
{
    TransitionSystem system;
    std::vector<StateId> origin; // new state -> state of the source system
    StateId root = 0;
};

/// Restriction to the radius-k neighbourhood of `a`: transitions kept at
/// states strictly inside the radius, states at distance exactly k become
/// terminating.
inline Embedding restrict_system( const TransitionSystem& sys, StateId a, std::size_t k )
{
    StateId src[] = { a };
    auto dist = gaifman_distances( sys, src );
    std::vector<StateId> origin;
    std::vector<std::optional<StateId>> image( sys.state_count() );
    for ( StateId s = 0; s < sys.state_count(); ++s )
        if ( dist[ s ] && *dist[ s ] <= k )
        {
            image[ s ] = origin.size();
            origin.push_back( s );
        }

    RawSystem raw;
    raw.atoms = sys.atoms();
    for ( StateId s : origin )
    {
        auto v = sys.valuation( s );
        raw.add_state( sys.label( s ), std::vector<Rational>( v.begin(), v.end() ) );
    }
    for ( StateId s : origin )
    {
        if ( *dist[ s ] >= k )
            continue;
        if ( const auto& succ = sys.successors( s ) )
            for ( const auto& e : *succ )
                raw.add_edge( *image[ s ], *image[ e.state ], e.weight );
    }
    return { validate_system( raw ), std::move( origin ), *image[ a ] };
}

/// Depth-bounded unravelling: the tree of transition paths from `a` of
/// length at most `depth`, with nodes at exactly `depth` terminating.
/// Node labels are the label paths joined by '/'.
inline Embedding unravel( const TransitionSystem& sys, StateId a, std::size_t depth )
{
    sys.check_state( a );
    RawSystem raw;
    raw.atoms = sys.atoms();
    std::vector<StateId> origin;
    std::vector<std::size_t> level;

    auto add_node = [ & ]( std::string label, StateId last, std::size_t lvl ) {
        auto v = sys.valuation( last );
        origin.push_back( last );
        level.push_back( lvl );
        return raw.add_state( std::move( label ), std::vector<Rational>( v.begin(), v.end() ) );
    };

    add_node( sys.label( a ), a, 0 );
    for ( StateId node = 0; node < origin.size(); ++node )
    {
        if ( level[ node ] >= depth )
            continue;
        if ( const auto& succ = sys.successors( origin[ node ] ) )
            for ( const auto& e : *succ )
            {
                std::string label = raw.states[ node ].label + "/" + sys.label( e.state );
                StateId child = add_node( std::move( label ), e.state, level[ node ] + 1 );
                raw.add_edge( node, child, e.weight );
            }
    }
    return { validate_system( raw ), std::move( origin ), 0 };
}

// ---------------------------------------------------------------------------
// Morphisms

struct MorphismCandidate
{
    const TransitionSystem& source;
    const TransitionSystem& target;
    std::vector<StateId> map;
};

struct MorphismCheck
{
    bool ok = true;
    std::string violation;

    explicit operator bool() const noexcept { return ok; }
};

/// Exact check of the coalgebra-morphism conditions: atoms preserved,
/// termination reflected both ways, and image measures equal.
inline MorphismCheck check_morphism( const MorphismCandidate& cand )
{
    require_same_atoms( cand.source, cand.target );
    const auto& A = cand.source;
    const auto& B = cand.target;
    if ( cand.map.size() != A.state_count() )
        fail( ErrorCode::parameter, "morphism map is not total on the source" );
    for ( StateId t : cand.map )
        B.check_state( t );

    for ( StateId a = 0; a < A.state_count(); ++a )
    {
        const StateId fa = cand.map[ a ];
        for ( std::size_t p = 0; p < A.atoms().size(); ++p )
            if ( A.value( a, p ) != B.value( fa, p ) )
                return { false, "atom " + A.atoms()[ p ] + " differs at " + A.label( a ) };
        if ( A.is_terminating( a ) != B.is_terminating( fa ) )
            return { false, "termination differs at " + A.label( a ) };
        if ( A.is_terminating( a ) )
            continue;
        std::map<StateId, Rational> image;
        for ( const auto& e : *A.successors( a ) )
            image[ cand.map[ e.state ] ] += e.weight;
        for ( const auto& e : *B.successors( fa ) )
            if ( image[ e.state ] != e.weight )
                return { false, "image measure differs at " + A.label( a ) + " for target " + B.label( e.state ) };
        for ( const auto& [ t, w ] : image )
            if ( w != B.transition( fa, t ) )
                return { false, "image measure differs at " + A.label( a ) + " for target " + B.label( t ) };
    }
    return {};
}

} // namespace ptsm
