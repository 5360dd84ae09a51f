#pragma once

#include "evaluator.hpp"
#include "random.hpp"
#include "simplex.hpp"
#include "system.hpp"
#include "transport.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace ptsm
{

/// Symmetric matrix of distances with zero diagonal.
class PseudometricMatrix
{
    std::size_t _n = 0;
    std::vector<Rational> _v;

public:
    PseudometricMatrix() = default;
    explicit PseudometricMatrix( std::size_t n ) : _n( n ), _v( n * n ) {}

    std::size_t size() const noexcept { return _n; }

    const Rational& operator()( StateId a, StateId b ) const { return _v.at( a * _n + b ); }

    void set( StateId a, StateId b, const Rational& value )
    {
        _v.at( a * _n + b ) = value;
        _v.at( b * _n + a ) = value;
    }

    friend bool operator==( const PseudometricMatrix&, const PseudometricMatrix& ) = default;

    // First violated pseudometric axiom, or empty.
    std::string check_axioms() const
    {
        for ( StateId a = 0; a < _n; ++a )
        {
            if ( !( *this )( a, a ).is_zero() )
                return "nonzero diagonal at " + std::to_string( a );
            for ( StateId b = 0; b < _n; ++b )
            {
                if ( !in_unit_interval( ( *this )( a, b ) ) )
                    return "entry outside [0,1] at " + std::to_string( a ) + "," + std::to_string( b );
                if ( ( *this )( a, b ) != ( *this )( b, a ) )
                    return "asymmetric at " + std::to_string( a ) + "," + std::to_string( b );
                for ( StateId c = 0; c < _n; ++c )
                    if ( ( *this )( a, c ) > ( *this )( a, b ) + ( *this )( b, c ) )
                        return "triangle inequality fails at " + std::to_string( a ) + "," + std::to_string( b ) + ","
                               + std::to_string( c );
            }
        }
        return {};
    }
};

struct CouplingEntry
{
    StateId a;
    StateId b;
    Rational mass;
};

/// Transport plan between two successor distributions; only positive
/// entries are stored, ordered by (a, b).
struct Coupling
{
    std::vector<CouplingEntry> entries;

    Rational integrate( const PseudometricMatrix& d ) const
    {
        Rational sum;
        for ( const auto& e : entries )
            sum += e.mass * d( e.a, e.b );
        return sum;
    }

    // Empty string when the marginals are exactly p1 and p2.
    std::string check_marginals( const Distribution& p1, const Distribution& p2 ) const
    {
        std::map<StateId, Rational> left, right;
        for ( const auto& e : entries )
        {
            if ( e.mass.sign() <= 0 )
                return "non-positive mass";
            left[ e.a ] += e.mass;
            right[ e.b ] += e.mass;
        }
        auto same = []( const std::map<StateId, Rational>& m, const Distribution& p ) {
            if ( m.size() != p.size() )
                return false;
            for ( const auto& e : p )
            {
                auto it = m.find( e.state );
                if ( it == m.end() || it->second != e.weight )
                    return false;
            }
            return true;
        };
        if ( !same( left, p1 ) )
            return "first marginal differs";
        if ( !same( right, p2 ) )
            return "second marginal differs";
        return {};
    }
};

/// Non-expansive function on the union of two supports.
struct PriceFunction
{
    std::vector<StateId> domain;
    std::vector<Rational> values;

    Rational operator()( StateId s ) const
    {
        auto it = std::lower_bound( domain.begin(), domain.end(), s );
        if ( it == domain.end() || *it != s )
            fail( ErrorCode::internal, "price function queried outside its domain" );
        return values[ static_cast<std::size_t>( it - domain.begin() ) ];
    }

    Rational integrate( const Distribution& p ) const
    {
        Rational sum;
        for ( const auto& e : p )
            sum += e.weight * ( *this )( e.state );
        return sum;
    }
};

struct WassersteinResult
{
    Rational value;
    Coupling coupling;
};

struct KantorovichResult
{
    Rational value;
    PriceFunction price; // empty when a side terminates
};

/// Minimal expected distance over couplings. A terminating side is the
/// extra point at distance 1 from every distribution.
inline WassersteinResult wasserstein_lift( const PseudometricMatrix& d, const Successors& p1, const Successors& p2 )
{
    if ( !p1 || !p2 )
        return { Rational( p1.has_value() != p2.has_value() ? 1 : 0 ), {} };
    const auto s1 = p1->support();
    const auto s2 = p2->support();
    std::vector<Rational> supply, demand;
    for ( const auto& e : *p1 )
        supply.push_back( e.weight );
    for ( const auto& e : *p2 )
        demand.push_back( e.weight );
    std::vector<std::vector<Rational>> cost( s1.size(), std::vector<Rational>( s2.size() ) );
    for ( std::size_t i = 0; i < s1.size(); ++i )
        for ( std::size_t j = 0; j < s2.size(); ++j )
            cost[ i ][ j ] = d( s1[ i ], s2[ j ] );
    auto t = solve_transport( supply, demand, cost );
    WassersteinResult out{ t.cost, {} };
    for ( std::size_t i = 0; i < s1.size(); ++i )
        for ( std::size_t j = 0; j < s2.size(); ++j )
            if ( t.flow[ i ][ j ].sign() > 0 )
                out.coupling.entries.push_back( { s1[ i ], s2[ j ], t.flow[ i ][ j ] } );
    return out;
}

/// Maximal |E_p1 f - E_p2 f| over f: S -> [0,1] with f(x) - f(y) <= d(x,y),
/// where S is the union of the supports. Solved as two linear programs.
inline KantorovichResult kantorovich_lift( const PseudometricMatrix& d, const Successors& p1, const Successors& p2 )
{
    if ( !p1 || !p2 )
        return { Rational( p1.has_value() != p2.has_value() ? 1 : 0 ), {} };
    std::vector<StateId> S = p1->support();
    for ( StateId s : p2->support() )
        S.push_back( s );
    std::sort( S.begin(), S.end() );
    S.erase( std::unique( S.begin(), S.end() ), S.end() );
    const std::size_t k = S.size();

    LinearProgram lp;
    lp.n_vars = k;
    for ( std::size_t i = 0; i < k; ++i )
    {
        std::vector<Rational> row( k );
        row[ i ] = Rational( 1 );
        lp.add_row( std::move( row ), Relation::le, Rational( 1 ) );
    }
    for ( std::size_t i = 0; i < k; ++i )
        for ( std::size_t j = 0; j < k; ++j )
        {
            // distances of 1 are implied by the box constraints
            if ( i == j || d( S[ i ], S[ j ] ) >= Rational( 1 ) )
                continue;
            std::vector<Rational> row( k );
            row[ i ] = Rational( 1 );
            row[ j ] = Rational( -1 );
            lp.add_row( std::move( row ), Relation::le, d( S[ i ], S[ j ] ) );
        }

    KantorovichResult best;
    bool have = false;
    for ( int sign : { 1, -1 } )
    {
        lp.objective.assign( k, Rational( 0 ) );
        for ( std::size_t i = 0; i < k; ++i )
            lp.objective[ i ] = Rational( sign ) * ( p1->weight( S[ i ] ) - p2->weight( S[ i ] ) );
        auto r = solve_lp( lp );
        if ( r.status != LpResult::Status::optimal )
            fail( ErrorCode::internal, "price-function program not optimal" );
        if ( !have || r.value > best.value )
        {
            best = { r.value, { S, r.x } };
            have = true;
        }
    }
    return best;
}

inline Rational duality_gap( const PseudometricMatrix& d, const Successors& p1, const Successors& p2 )
{
    return abs( wasserstein_lift( d, p1, p2 ).value - kantorovich_lift( d, p1, p2 ).value );
}

enum class LiftMethod
{
    wasserstein,
    kantorovich
};

inline const char* method_name( LiftMethod m ) { return m == LiftMethod::wasserstein ? "W" : "K"; }

struct DistanceOptions
{
    // Turning this off drops the atom term from each step; only used to
    // check that the test suite notices.
    bool include_atoms = true;
};

/// Chain d_0 .. d_n on one system (callers with two systems pass their
/// disjoint union).
struct DistanceChain
{
    TransitionSystem system;
    StateId offset_b = 0; // first state of the second system in `system`
    LiftMethod method = LiftMethod::wasserstein;
    std::vector<PseudometricMatrix> levels;

    std::size_t depth() const { return levels.size() - 1; }
    const PseudometricMatrix& at( std::size_t n ) const { return levels.at( n ); }
    const PseudometricMatrix& top() const { return levels.back(); }
    // Distance between state a of the first system and b of the second.
    const Rational& cross( std::size_t n, StateId a, StateId b ) const { return levels.at( n )( a, offset_b + b ); }
};

inline Rational atom_gap( const TransitionSystem& sys, StateId a, StateId b )
{
    Rational g;
    for ( std::size_t p = 0; p < sys.atoms().size(); ++p )
        g = max( g, abs( sys.value( a, p ) - sys.value( b, p ) ) );
    return g;
}

/// d_{m+1}(a,b) = max(max_p |p(a)-p(b)|, lift(d_m)(pi_a, pi_b)).
inline PseudometricMatrix distance_step( const TransitionSystem& sys, const PseudometricMatrix& prev, LiftMethod method,
                                         const DistanceOptions& options = {} )
{
    const std::size_t n = sys.state_count();
    PseudometricMatrix next( n );
    for ( StateId a = 0; a < n; ++a )
        for ( StateId b = a + 1; b < n; ++b )
        {
            Rational v = options.include_atoms ? atom_gap( sys, a, b ) : Rational( 0 );
            if ( v < Rational( 1 ) )
            {
                const auto& pa = sys.successors( a );
                const auto& pb = sys.successors( b );
                Rational lift = method == LiftMethod::wasserstein ? wasserstein_lift( prev, pa, pb ).value
                                                                  : kantorovich_lift( prev, pa, pb ).value;
                v = max( v, lift );
            }
            next.set( a, b, v );
        }
    return next;
}

inline DistanceChain behavioural_distance( const TransitionSystem& sys, std::size_t n, LiftMethod method,
                                           const DistanceOptions& options = {} )
{
    DistanceChain chain{ sys, 0, method, {} };
    chain.levels.emplace_back( sys.state_count() );
    for ( std::size_t m = 0; m < n; ++m )
        chain.levels.push_back( distance_step( sys, chain.levels.back(), method, options ) );
    return chain;
}

/// Cross-system chain, computed on the disjoint union.
inline DistanceChain behavioural_distance( const TransitionSystem& a, const TransitionSystem& b, std::size_t n,
                                           LiftMethod method, const DistanceOptions& options = {} )
{
    auto u = disjoint_union( { &a, &b } );
    auto chain = behavioural_distance( u.system, n, method, options );
    chain.offset_b = u.offsets[ 1 ];
    return chain;
}

/// max |phi(a) - phi(b)| over the given formulas, a lower bound on the
/// depth-n logical distance. `a` lives in sysA and `b` in sysB.
inline Rational logical_distance_lb( const TransitionSystem& sysA, const TransitionSystem& sysB, StateId a, StateId b,
                                     const std::vector<ModalFormula>& formulas, std::size_t n )
{
    require_same_atoms( sysA, sysB );
    Rational best;
    for ( const auto& f : formulas )
    {
        const std::size_t r = modal_rank( f );
        if ( r > n )
            fail( ErrorCode::rank_violation,
                  "formula of rank " + std::to_string( r ) + " exceeds depth " + std::to_string( n ) );
        best = max( best, abs( eval_modal( sysA, f, a ) - eval_modal( sysB, f, b ) ) );
    }
    return best;
}

/// Random pseudometric on n points: random grid weights closed under
/// shortest paths (capped at 1), with some zero distances.
inline PseudometricMatrix random_pseudometric( Rng& rng, std::size_t n, std::size_t denominator )
{
    const auto den = static_cast<long>( denominator );
    PseudometricMatrix d( n );
    for ( StateId a = 0; a < n; ++a )
        for ( StateId b = a + 1; b < n; ++b )
            d.set( a, b, rng.below( 6 ) == 0 ? Rational( 0 ) : Rational( static_cast<long>( rng.between( 1, den ) ), den ) );
    for ( StateId k = 0; k < n; ++k )
        for ( StateId a = 0; a < n; ++a )
            for ( StateId b = a + 1; b < n; ++b )
                if ( d( a, k ) + d( k, b ) < d( a, b ) )
                    d.set( a, b, d( a, k ) + d( k, b ) );
    return d;
}

/// Random distribution on n points with weights on the 1/denominator grid
/// and at most `support` entries.
inline Distribution random_distribution( Rng& rng, std::size_t n, std::size_t support, std::size_t denominator )
{
    const auto den = static_cast<long>( denominator );
    support = std::max<std::size_t>( 1, std::min( { support, n, denominator } ) );
    std::vector<StateId> pool( n );
    for ( StateId i = 0; i < n; ++i )
        pool[ i ] = i;
    for ( std::size_t i = 0; i < support; ++i )
        std::swap( pool[ i ], pool[ i + rng.below( n - i ) ] );
    std::vector<long> cuts{ 0, den };
    while ( cuts.size() < support + 1 )
    {
        long c = static_cast<long>( rng.between( 1, den - 1 ) );
        if ( std::find( cuts.begin(), cuts.end(), c ) == cuts.end() )
            cuts.push_back( c );
    }
    std::sort( cuts.begin(), cuts.end() );
    std::vector<Distribution::Entry> entries;
    for ( std::size_t i = 0; i < support; ++i )
        entries.push_back( { pool[ i ], Rational( cuts[ i + 1 ] - cuts[ i ], den ) } );
    return Distribution::make( std::move( entries ) );
}

} // namespace ptsm
