#pragma once

#include "metrics.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ptsm
{

/// Position of the bisimulation game: a in the first system, b in the
/// second, allowed deviation eps, rounds still to play.
struct GameConfig
{
    StateId a = 0;
    StateId b = 0;
    Rational eps;
    std::size_t rounds = 0;

    friend bool operator==( const GameConfig&, const GameConfig& ) = default;
};

struct MoveEntry
{
    StateId a;
    StateId b;
    Rational mass;  // coupling weight
    Rational slack; // deviation allowed after the spoiler picks (a, b)

    friend bool operator==( const MoveEntry&, const MoveEntry& ) = default;
};

/// Duplicator's move: a coupling of the successor distributions with a
/// slack per coupled pair.
struct DuplicatorMove
{
    std::vector<MoveEntry> entries;

    friend bool operator==( const DuplicatorMove&, const DuplicatorMove& ) = default;
};

/// Strategy tree. `children[i]` answers the spoiler's choice of
/// `move->entries[i]`. Positions that are already decided carry no move.
struct StrategyCertificate
{
    GameConfig config;
    std::optional<DuplicatorMove> move;
    std::vector<StrategyCertificate> children;

    std::size_t node_count() const
    {
        std::size_t n = 1;
        for ( const auto& c : children )
            n += c.node_count();
        return n;
    }

    friend bool operator==( const StrategyCertificate&, const StrategyCertificate& ) = default;
};

/// Depth-n game value; equals the Wasserstein distance, and is certified
/// separately by synthesize_duplicator_strategy and verify_certificate.
inline Rational game_distance( const TransitionSystem& sysA, const TransitionSystem& sysB, StateId a, StateId b,
                               std::size_t n )
{
    sysA.check_state( a );
    sysB.check_state( b );
    return behavioural_distance( sysA, sysB, n, LiftMethod::wasserstein ).cross( n, a, b );
}

namespace detail
{

enum class Outcome
{
    undecided,
    duplicator,
    spoiler
};

// Rules applied at a position before any move. Termination and eps = 1
// are looked at first, then the atoms. No rule applies once the last
// round has been played.
inline Outcome position_outcome( const TransitionSystem& A, const TransitionSystem& B, const GameConfig& c,
                                 std::string* why = nullptr )
{
    if ( c.rounds == 0 )
        return Outcome::duplicator;
    const bool ta = A.is_terminating( c.a ), tb = B.is_terminating( c.b );
    if ( ( ta && tb ) || c.eps == Rational( 1 ) )
        return Outcome::duplicator;
    if ( ta != tb )
    {
        if ( why )
            *why = "exactly one state is terminating and eps < 1";
        return Outcome::spoiler;
    }
    for ( std::size_t p = 0; p < A.atoms().size(); ++p )
        if ( abs( A.value( c.a, p ) - B.value( c.b, p ) ) > c.eps )
        {
            if ( why )
                *why = "atom " + A.atoms()[ p ] + " differs by " + abs( A.value( c.a, p ) - B.value( c.b, p ) ).str()
                       + " > eps " + c.eps.str();
            return Outcome::spoiler;
        }
    return Outcome::undecided;
}

} // namespace detail

/// Builds a winning duplicator strategy for eps >= d_n(a,b): at every
/// position the optimal transport plan for d_{r-1}, with slack d_{r-1}
/// plus an equal share of the surplus eps - E[d_{r-1}].
inline StrategyCertificate synthesize_duplicator_strategy( const TransitionSystem& sysA, const TransitionSystem& sysB,
                                                           StateId a, StateId b, std::size_t n, const Rational& eps )
{
    require_same_atoms( sysA, sysB );
    sysA.check_state( a );
    sysB.check_state( b );
    if ( !in_unit_interval( eps ) )
        fail( ErrorCode::range, "eps " + eps.str() + " outside [0,1]" );
    const auto chain = behavioural_distance( sysA, sysB, n, LiftMethod::wasserstein );
    const StateId off = chain.offset_b;
    const Rational dn = chain.cross( n, a, b );
    if ( eps < dn )
        fail( ErrorCode::not_winnable, "eps " + eps.str() + " is below the depth-" + std::to_string( n ) + " distance "
                                           + dn.str() );

    const auto& U = chain.system;
    std::map<std::tuple<StateId, StateId, std::size_t>, Coupling> plans;

    std::function<StrategyCertificate( StateId, StateId, const Rational&, std::size_t )> build =
        [ & ]( StateId x, StateId y, const Rational& e, std::size_t r ) {
            StrategyCertificate node{ { x, y, e, r }, std::nullopt, {} };
            switch ( detail::position_outcome( sysA, sysB, node.config ) )
            {
            case detail::Outcome::duplicator: return node;
            case detail::Outcome::spoiler:
                fail( ErrorCode::not_winnable, "spoiler wins at " + sysA.label( x ) + "|" + sysB.label( y ) );
            case detail::Outcome::undecided: break;
            }
            const auto& d = chain.at( r - 1 );
            auto key = std::tuple{ x, y, r };
            auto it = plans.find( key );
            if ( it == plans.end() )
                it = plans
                         .emplace( key, wasserstein_lift( d, U.successors( x ), U.successors( off + y ) ).coupling )
                         .first;
            const Coupling& mu = it->second;
            const Rational surplus = e - mu.integrate( d );
            if ( surplus.sign() < 0 )
                fail( ErrorCode::internal, "position below the transport value" );
            const Rational share = surplus / Rational( static_cast<long>( mu.entries.size() ) );
            node.move.emplace();
            for ( const auto& m : mu.entries )
            {
                const StateId ya = m.b - off;
                const Rational slack = min( Rational( 1 ), d( m.a, m.b ) + share );
                node.move->entries.push_back( { m.a, ya, m.mass, slack } );
                node.children.push_back( build( m.a, ya, slack, r - 1 ) );
            }
            return node;
        };
    return build( a, b, eps, n );
}

struct CertificateCheck
{
    bool ok = true;
    std::string violation;
    std::vector<std::string> path; // "a|b" labels from the root to the failing node

    explicit operator bool() const noexcept { return ok; }
};

/// Checks every rule of the game at every node that still matters.
inline CertificateCheck verify_certificate( const StrategyCertificate& cert, const TransitionSystem& sysA,
                                            const TransitionSystem& sysB )
{
    require_same_atoms( sysA, sysB );
    CertificateCheck result;
    std::vector<std::string> path;

    std::function<bool( const StrategyCertificate& )> check = [ & ]( const StrategyCertificate& node ) -> bool {
        const auto& c = node.config;
        auto bad = [ & ]( std::string why ) {
            result = { false, std::move( why ), path };
            return false;
        };
        if ( c.a >= sysA.state_count() || c.b >= sysB.state_count() )
            return bad( "state out of range" );
        path.push_back( sysA.label( c.a ) + "|" + sysB.label( c.b ) );
        if ( !in_unit_interval( c.eps ) )
            return bad( "eps " + c.eps.str() + " outside [0,1]" );

        std::string why;
        switch ( detail::position_outcome( sysA, sysB, c, &why ) )
        {
        case detail::Outcome::duplicator: path.pop_back(); return true;
        case detail::Outcome::spoiler: return bad( why );
        case detail::Outcome::undecided: break;
        }
        if ( !node.move )
            return bad( "no duplicator move at an undecided position" );
        const auto& entries = node.move->entries;
        if ( node.children.size() != entries.size() )
            return bad( "children do not match the coupling support" );

        Rational spent;
        for ( const auto& e : entries )
        {
            if ( e.a >= sysA.state_count() || e.b >= sysB.state_count() )
                return bad( "coupled state out of range" );
            if ( !in_unit_interval( e.slack ) )
                return bad( "slack " + e.slack.str() + " outside [0,1]" );
            spent += e.mass * e.slack;
        }
        // marginals live in two different systems; compare each side separately
        std::map<StateId, Rational> left, right;
        for ( const auto& e : entries )
        {
            if ( e.mass.sign() <= 0 )
                return bad( "non-positive coupling mass" );
            left[ e.a ] += e.mass;
            right[ e.b ] += e.mass;
        }
        auto same = []( const std::map<StateId, Rational>& m, const Distribution& p ) {
            if ( m.size() != p.size() )
                return false;
            for ( const auto& x : p )
            {
                auto it = m.find( x.state );
                if ( it == m.end() || it->second != x.weight )
                    return false;
            }
            return true;
        };
        if ( !same( left, *sysA.successors( c.a ) ) )
            return bad( "coupling's first marginal differs from the successor distribution" );
        if ( !same( right, *sysB.successors( c.b ) ) )
            return bad( "coupling's second marginal differs from the successor distribution" );
        if ( spent > c.eps )
            return bad( "expected slack " + spent.str() + " exceeds eps " + c.eps.str() );

        for ( std::size_t i = 0; i < entries.size(); ++i )
        {
            const auto& child = node.children[ i ].config;
            if ( child.a != entries[ i ].a || child.b != entries[ i ].b || child.eps != entries[ i ].slack
                 || child.rounds + 1 != c.rounds )
                return bad( "child " + std::to_string( i ) + " does not follow its coupled pair" );
            if ( !check( node.children[ i ] ) )
                return false;
        }
        path.pop_back();
        return true;
    };
    check( cert );
    return result;
}

/// Plays every line of the game against the certificate: the spoiler tries
/// all coupled pairs, the duplicator answers from the tree. True iff no
/// line ends in a spoiler win. Deliberately separate from
/// verify_certificate.
inline bool exhaustive_spoiler( const StrategyCertificate& cert, const TransitionSystem& sysA,
                                const TransitionSystem& sysB )
{
    struct Play
    {
        const StrategyCertificate* node;
    };
    std::vector<Play> lines{ { &cert } };
    while ( !lines.empty() )
    {
        const StrategyCertificate& node = *lines.back().node;
        lines.pop_back();
        const GameConfig& c = node.config;
        if ( c.a >= sysA.state_count() || c.b >= sysB.state_count() || c.eps.sign() < 0 || c.eps > Rational( 1 ) )
            return false;
        if ( c.rounds == 0 )
            continue;

        const Successors& pa = sysA.successors( c.a );
        const Successors& pb = sysB.successors( c.b );
        if ( !pa && !pb )
            continue;
        if ( c.eps == Rational( 1 ) )
            continue;
        if ( !pa || !pb )
            return false;
        for ( std::size_t p = 0; p < sysA.atoms().size(); ++p )
        {
            Rational diff = sysA.value( c.a, p ) - sysB.value( c.b, p );
            if ( diff > c.eps || -diff > c.eps )
                return false;
        }

        // duplicator must commit to a legal move
        if ( !node.move || node.children.size() != node.move->entries.size() )
            return false;
        Rational budget = c.eps;
        std::vector<Rational> row( sysA.state_count() ), col( sysB.state_count() );
        for ( const auto& e : node.move->entries )
        {
            if ( e.a >= row.size() || e.b >= col.size() || e.mass.sign() <= 0 || e.slack.sign() < 0
                 || e.slack > Rational( 1 ) )
                return false;
            row[ e.a ] += e.mass;
            col[ e.b ] += e.mass;
            budget -= e.mass * e.slack;
        }
        if ( budget.sign() < 0 )
            return false;
        for ( StateId s = 0; s < row.size(); ++s )
            if ( row[ s ] != pa->weight( s ) )
                return false;
        for ( StateId s = 0; s < col.size(); ++s )
            if ( col[ s ] != pb->weight( s ) )
                return false;

        // spoiler picks any pair of positive mass; the answer must continue the game there
        for ( std::size_t i = 0; i < node.children.size(); ++i )
        {
            const auto& e = node.move->entries[ i ];
            const auto& next = node.children[ i ];
            if ( !( next.config == GameConfig{ e.a, e.b, e.slack, c.rounds - 1 } ) )
                return false;
            lines.push_back( { &next } );
        }
    }
    return true;
}

/// Partial-isomorphism condition on tuples: equality pattern, atom values
/// and pairwise transition weights all agree exactly.
inline bool partial_isomorphism( const TransitionSystem& sysA, const std::vector<StateId>& as,
                                 const TransitionSystem& sysB, const std::vector<StateId>& bs )
{
    require_same_atoms( sysA, sysB );
    if ( as.size() != bs.size() )
        fail( ErrorCode::length_mismatch,
              "tuples of length " + std::to_string( as.size() ) + " and " + std::to_string( bs.size() ) );
    for ( StateId s : as )
        sysA.check_state( s );
    for ( StateId s : bs )
        sysB.check_state( s );
    for ( std::size_t i = 0; i < as.size(); ++i )
    {
        for ( std::size_t p = 0; p < sysA.atoms().size(); ++p )
            if ( sysA.value( as[ i ], p ) != sysB.value( bs[ i ], p ) )
                return false;
        for ( std::size_t j = 0; j < as.size(); ++j )
        {
            if ( ( as[ i ] == as[ j ] ) != ( bs[ i ] == bs[ j ] ) )
                return false;
            if ( sysA.transition( as[ i ], as[ j ] ) != sysB.transition( bs[ i ], bs[ j ] ) )
                return false;
        }
    }
    return true;
}

} // namespace ptsm
