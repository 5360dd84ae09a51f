#pragma once

#include "evaluator.hpp"
#include "metrics.hpp"

#include <map>
#include <tuple>
#include <vector>

namespace ptsm
{

/// State function on a system together with the depth n of the
/// distance it is non-expansive for.
class StateFunction
{
    std::vector<Rational> _values;
    std::size_t _depth = 0;

    StateFunction( std::vector<Rational> values, std::size_t depth ) : _values( std::move( values ) ), _depth( depth ) {}

public:
    /// Checks range and |f(a) - f(b)| <= d_n(a,b) on all pairs.
    static StateFunction make( const DistanceChain& chain, std::vector<Rational> values, std::size_t depth )
    {
        if ( values.size() != chain.system.state_count() )
            fail( ErrorCode::parameter, "state function needs one value per state" );
        if ( depth > chain.depth() )
            fail( ErrorCode::parameter, "distance chain is shallower than depth " + std::to_string( depth ) );
        const auto& d = chain.at( depth );
        for ( StateId a = 0; a < values.size(); ++a )
        {
            if ( !in_unit_interval( values[ a ] ) )
                fail( ErrorCode::range, "state function value " + values[ a ].str() + " outside [0,1]" );
            for ( StateId b = a + 1; b < values.size(); ++b )
                if ( abs( values[ a ] - values[ b ] ) > d( a, b ) )
                    fail( ErrorCode::not_nonexpansive, "|f(" + chain.system.label( a ) + ") - f("
                                                           + chain.system.label( b ) + ")| exceeds d_"
                                                           + std::to_string( depth ) );
        }
        return { std::move( values ), depth };
    }

    const std::vector<Rational>& values() const noexcept { return _values; }
    const Rational& operator()( StateId s ) const { return _values.at( s ); }
    std::size_t depth() const noexcept { return _depth; }
};

/// Builds rank-bounded modal formulas on the system of a distance chain:
/// witnesses for distances, and approximants of non-expansive functions.
/// Keeps a formula cache, so repeated requests share subformulas.
class Synthesizer
{
    const DistanceChain& _chain;
    ModalEvaluator _eval;
    std::map<std::tuple<StateId, StateId, std::size_t, Rational>, ModalFormula> _witness_memo;

    const TransitionSystem& sys() const { return _chain.system; }

    static void check_slack( const Rational& delta )
    {
        if ( delta.sign() <= 0 )
            fail( ErrorCode::slack_too_small, "slack must be positive, got " + delta.str() );
    }

    mpz_class grid( const Rational& delta ) const
    {
        // multiples of at most delta / (4 |A|)
        Rational steps = Rational( 4 * static_cast<long>( std::max<std::size_t>( sys().state_count(), 1 ) ) ) / delta;
        return steps.ceil_to( 1 ).numerator();
    }

    void require_depth( std::size_t n ) const
    {
        if ( n > _chain.depth() )
            fail( ErrorCode::parameter, "distance chain is shallower than depth " + std::to_string( n ) );
    }

    static ModalFormula close_constant( const Rational& lo, const Rational& hi, const Rational& delta, const mpz_class& N )
    {
        // constant within delta of every value in [lo, hi]; grid point if possible
        const Rational mid = ( lo + hi ) / Rational( 2 );
        const Rational g = clamp_unit( mid.nearest_to( N ) );
        if ( hi - g <= delta && g - lo <= delta )
            return ModalFormula::constant( g );
        return ModalFormula::constant( mid );
    }

    // Unverified constructions ------------------------------------------------

    ModalFormula raw_witness( StateId a, StateId b, std::size_t n, const Rational& delta )
    {
        if ( a > b )
            std::swap( a, b );
        const auto key = std::tuple{ a, b, n, delta };
        if ( auto it = _witness_memo.find( key ); it != _witness_memo.end() )
            return it->second;

        ModalFormula out;
        if ( n == 0 || a == b || _chain.at( n )( a, b ).is_zero() )
            out = ModalFormula::constant( Rational( 0 ) );
        else if ( sys().is_terminating( a ) != sys().is_terminating( b ) )
        {
            // atoms may separate too, but <>1 separates by the full 1
            out = ModalFormula::diamond( ModalFormula::constant( Rational( 1 ) ) );
        }
        else
        {
            const auto& prev = _chain.at( n - 1 );
            auto lift = kantorovich_lift( prev, sys().successors( a ), sys().successors( b ) );
            Rational gap;
            std::size_t best_atom = 0;
            for ( std::size_t p = 0; p < sys().atoms().size(); ++p )
            {
                Rational g = abs( sys().value( a, p ) - sys().value( b, p ) );
                if ( g > gap )
                    gap = g, best_atom = p;
            }
            if ( gap.sign() > 0 && gap >= lift.value )
                out = ModalFormula::atom( sys().atoms()[ best_atom ] );
            else
            {
                // Both transient here. Extend the optimal price to all states
                // (smallest non-expansive extension) and approximate it on the
                // union of supports one level down.
                std::vector<Rational> ext( sys().state_count() );
                for ( StateId s = 0; s < ext.size(); ++s )
                {
                    Rational v( 1 );
                    for ( std::size_t i = 0; i < lift.price.domain.size(); ++i )
                        v = min( v, lift.price.values[ i ] + prev( s, lift.price.domain[ i ] ) );
                    ext[ s ] = v;
                }
                auto psi = raw_approximate( ext, n - 1, delta / Rational( 2 ), lift.price.domain );
                out = ModalFormula::diamond( psi );
            }
        }
        _witness_memo.emplace( key, out );
        return out;
    }

    ModalFormula raw_pair( const std::vector<Rational>& f, std::size_t n, StateId a, StateId b, const Rational& delta )
    {
        const mpz_class N = grid( delta );
        if ( abs( f[ a ] - f[ b ] ) <= delta )
            return close_constant( min( f[ a ], f[ b ] ), max( f[ a ], f[ b ] ), delta, N );

        const StateId hi = f[ a ] > f[ b ] ? a : b;
        const StateId lo = hi == a ? b : a;
        const Rational spread = f[ hi ] - f[ lo ];

        ModalFormula psi = raw_witness( hi, lo, n, delta / Rational( 2 ) );
        if ( _eval.value( psi, hi ) < _eval.value( psi, lo ) )
            psi = ModalFormula::negation( psi );
        // shift so lo sits at 0, cap at the wanted spread, lift to f(lo)
        const Rational shift = _eval.value( psi, lo ).ceil_to( N );
        ModalFormula psi1 = ModalFormula::trunc_sub( psi, shift );
        ModalFormula psi2 = ModalFormula::conjunction( psi1, ModalFormula::constant( spread.floor_to( N ) ) );
        const Rational base = clamp_unit( f[ lo ].nearest_to( N ) );
        return ModalFormula::negation( ModalFormula::trunc_sub( ModalFormula::negation( psi2 ), base ) );
    }

    ModalFormula raw_approximate( const std::vector<Rational>& f, std::size_t n, const Rational& delta,
                                  const std::vector<StateId>& domain )
    {
        if ( domain.empty() )
            return ModalFormula::constant( Rational( 0 ) );
        Rational lo = f[ domain.front() ], hi = lo;
        for ( StateId s : domain )
            lo = min( lo, f[ s ] ), hi = max( hi, f[ s ] );
        if ( hi - lo <= delta + delta )
            return close_constant( lo, hi, delta, grid( delta ) );

        const Rational pair_delta = delta / Rational( 2 );
        ModalFormula result;
        for ( StateId x : domain )
        {
            ModalFormula row;
            for ( StateId y : domain )
            {
                ModalFormula g = raw_pair( f, n, x, y, pair_delta );
                row = row.valid() ? ModalFormula::conjunction( row, g ) : g;
            }
            result = result.valid() ? ModalFormula::disjunction( result, row ) : row;
        }
        return result;
    }

    // Post-conditions, checked by evaluation ----------------------------------

    void verify_close( const ModalFormula& phi, const std::vector<Rational>& f, const std::vector<StateId>& domain,
                       const Rational& delta, std::size_t n, const char* what )
    {
        if ( modal_rank( phi ) > n )
            fail( ErrorCode::internal, std::string( what ) + " exceeded the rank budget" );
        const auto& v = _eval.values( phi );
        for ( StateId s : domain )
            if ( abs( v[ s ] - f[ s ] ) > delta )
                fail( ErrorCode::internal, std::string( what ) + " missed the target at " + sys().label( s ) );
    }

public:
    explicit Synthesizer( const DistanceChain& chain ) : _chain( chain ), _eval( chain.system ) {}

    const DistanceChain& chain() const noexcept { return _chain; }
    ModalEvaluator& evaluator() noexcept { return _eval; }

    /// Rank <= n formula with |phi(a) - phi(b)| >= d_n(a,b) - delta.
    ModalFormula witness( StateId a, StateId b, std::size_t n, const Rational& delta )
    {
        check_slack( delta );
        require_depth( n );
        sys().check_state( a );
        sys().check_state( b );
        ModalFormula phi = simplify( raw_witness( a, b, n, delta ) );
        if ( modal_rank( phi ) > n )
            fail( ErrorCode::internal, "witness exceeded the rank budget" );
        if ( abs( _eval.value( phi, a ) - _eval.value( phi, b ) ) < _chain.at( n )( a, b ) - delta )
            fail( ErrorCode::internal, "witness separation below d_n - delta" );
        return phi;
    }

    /// Rank <= depth formula within delta of f at a and at b.
    ModalFormula pair( const StateFunction& f, StateId a, StateId b, const Rational& delta )
    {
        check_slack( delta );
        require_depth( f.depth() );
        sys().check_state( a );
        sys().check_state( b );
        ModalFormula phi = simplify( raw_pair( f.values(), f.depth(), a, b, delta ) );
        verify_close( phi, f.values(), { a, b }, delta, f.depth(), "pair approximation" );
        return phi;
    }

    /// Rank <= depth formula within delta of f at every state.
    ModalFormula approximate( const StateFunction& f, const Rational& delta )
    {
        check_slack( delta );
        require_depth( f.depth() );
        std::vector<StateId> all( sys().state_count() );
        for ( StateId s = 0; s < all.size(); ++s )
            all[ s ] = s;
        ModalFormula phi = simplify( raw_approximate( f.values(), f.depth(), delta, all ) );
        verify_close( phi, f.values(), all, delta, f.depth(), "approximation" );
        return phi;
    }
};

inline ModalFormula pair_approximation( const DistanceChain& chain, const StateFunction& f, StateId a, StateId b,
                                        const Rational& delta )
{
    return Synthesizer( chain ).pair( f, a, b, delta );
}

inline ModalFormula approximate_nonexpansive( const DistanceChain& chain, const StateFunction& f, const Rational& delta )
{
    return Synthesizer( chain ).approximate( f, delta );
}

struct WitnessResult
{
    ModalFormula formula;
    Rational value_a;
    Rational value_b;
    Rational gap;
    Rational distance;
};

/// Witness for d_n(a,b) with a in sysA and b in sysB.
inline WitnessResult witness_formula( const TransitionSystem& sysA, const TransitionSystem& sysB, StateId a, StateId b,
                                      std::size_t n, const Rational& delta )
{
    if ( delta.sign() <= 0 )
        fail( ErrorCode::slack_too_small, "slack must be positive, got " + delta.str() );
    sysA.check_state( a );
    sysB.check_state( b );
    auto chain = behavioural_distance( sysA, sysB, n, LiftMethod::kantorovich );
    Synthesizer synth( chain );
    auto phi = synth.witness( a, chain.offset_b + b, n, delta );
    WitnessResult out{ phi, eval_modal( sysA, phi, a ), eval_modal( sysB, phi, b ), {}, chain.cross( n, a, b ) };
    out.gap = abs( out.value_a - out.value_b );
    return out;
}

} // namespace ptsm
