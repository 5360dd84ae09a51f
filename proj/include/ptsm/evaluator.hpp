#pragma once

#include "formula.hpp"
#include "system.hpp"

#include <map>
#include <string>
#include <vector>

namespace ptsm
{

namespace detail
{
inline std::size_t resolve_atom( const TransitionSystem& sys, const std::string& name )
{
    if ( auto idx = sys.atom_index( name ) )
        return *idx;
    fail( ErrorCode::unknown_atom, "atom '" + name + "' is not declared by the system" );
}
} // namespace detail

/// Truth value of `phi` at state `a`, by direct recursion on the formula.
inline Rational eval_modal( const TransitionSystem& sys, const ModalFormula& phi, StateId a )
{
    using K = ModalFormula::Kind;
    sys.check_state( a );
    switch ( phi.kind() )
    {
    case K::constant: return phi.value();
    case K::atom: return sys.value( a, detail::resolve_atom( sys, phi.name() ) );
    case K::trunc_sub: return max( eval_modal( sys, phi.arg(), a ) - phi.value(), Rational( 0 ) );
    case K::negation: return Rational( 1 ) - eval_modal( sys, phi.arg(), a );
    case K::conjunction: return min( eval_modal( sys, phi.lhs(), a ), eval_modal( sys, phi.rhs(), a ) );
    case K::disjunction: return max( eval_modal( sys, phi.lhs(), a ), eval_modal( sys, phi.rhs(), a ) );
    case K::diamond:
    case K::box:
    {
        const bool box = phi.kind() == K::box;
        Rational sum;
        if ( const auto& succ = sys.successors( a ) )
            for ( const auto& e : *succ )
            {
                Rational v = eval_modal( sys, phi.arg(), e.state );
                sum += e.weight * ( box ? Rational( 1 ) - v : v );
            }
        return box ? Rational( 1 ) - sum : sum;
    }
    }
    fail( ErrorCode::internal, "unhandled formula kind" );
}

/// Batch evaluator: one value vector per distinct subformula node, so
/// shared subterms of a formula DAG are evaluated once. Keeps its cache
/// across calls; the system must outlive the evaluator.
class ModalEvaluator
{
    const TransitionSystem& _sys;
    std::map<const void*, std::pair<ModalFormula, std::vector<Rational>>> _cache;

public:
    explicit ModalEvaluator( const TransitionSystem& sys ) : _sys( sys ) {}

    const std::vector<Rational>& values( const ModalFormula& phi )
    {
        if ( auto it = _cache.find( phi.identity() ); it != _cache.end() )
            return it->second.second;
        using K = ModalFormula::Kind;
        const std::size_t n = _sys.state_count();
        std::vector<Rational> out( n );
        switch ( phi.kind() )
        {
        case K::constant: out.assign( n, phi.value() ); break;
        case K::atom:
        {
            const std::size_t p = detail::resolve_atom( _sys, phi.name() );
            for ( StateId s = 0; s < n; ++s )
                out[ s ] = _sys.value( s, p );
            break;
        }
        case K::trunc_sub:
        {
            const auto& v = values( phi.arg() );
            for ( StateId s = 0; s < n; ++s )
                out[ s ] = max( v[ s ] - phi.value(), Rational( 0 ) );
            break;
        }
        case K::negation:
        {
            const auto& v = values( phi.arg() );
            for ( StateId s = 0; s < n; ++s )
                out[ s ] = Rational( 1 ) - v[ s ];
            break;
        }
        case K::conjunction:
        case K::disjunction:
        {
            const auto& l = values( phi.lhs() );
            const auto& r = values( phi.rhs() );
            const bool conj = phi.kind() == K::conjunction;
            for ( StateId s = 0; s < n; ++s )
                out[ s ] = conj ? min( l[ s ], r[ s ] ) : max( l[ s ], r[ s ] );
            break;
        }
        case K::diamond:
        case K::box:
        {
            const auto& v = values( phi.arg() );
            const bool box = phi.kind() == K::box;
            for ( StateId s = 0; s < n; ++s )
            {
                Rational sum;
                if ( const auto& succ = _sys.successors( s ) )
                    for ( const auto& e : *succ )
                        sum += e.weight * ( box ? Rational( 1 ) - v[ e.state ] : v[ e.state ] );
                out[ s ] = box ? Rational( 1 ) - sum : sum;
            }
            break;
        }
        }
        return _cache.emplace( phi.identity(), std::pair{ phi, std::move( out ) } ).first->second.second;
    }

    const Rational& value( const ModalFormula& phi, StateId a )
    {
        _sys.check_state( a );
        return values( phi )[ a ];
    }
};

/// Values of `phi` at every state, indexed by StateId.
inline std::vector<Rational> eval_modal_all( const TransitionSystem& sys, const ModalFormula& phi )
{
    return ModalEvaluator( sys ).values( phi );
}

using Environment = std::map<std::string, StateId>;

/// Truth value of a first-order formula under an assignment of its free
/// variables. Quantifiers range over the finite state set, so the
/// supremum is a maximum.
inline Rational eval_fo( const TransitionSystem& sys, const FOFormula& phi, const Environment& env )
{
    using K = FOFormula::Kind;
    auto lookup = [ & ]( const std::string& v ) {
        auto it = env.find( v );
        if ( it == env.end() )
            fail( ErrorCode::unbound_variable, "variable '" + v + "' has no value" );
        sys.check_state( it->second );
        return it->second;
    };
    switch ( phi.kind() )
    {
    case K::constant: return phi.value();
    case K::atom: return sys.value( lookup( phi.var() ), detail::resolve_atom( sys, phi.name() ) );
    case K::equality: return Rational( lookup( phi.var() ) == lookup( phi.var2() ) ? 1 : 0 );
    case K::trunc_sub: return max( eval_fo( sys, phi.arg(), env ) - phi.value(), Rational( 0 ) );
    case K::negation: return Rational( 1 ) - eval_fo( sys, phi.arg(), env );
    case K::conjunction: return min( eval_fo( sys, phi.lhs(), env ), eval_fo( sys, phi.rhs(), env ) );
    case K::exists:
    {
        Environment inner = env;
        Rational best;
        for ( StateId s = 0; s < sys.state_count(); ++s )
        {
            inner[ phi.var() ] = s;
            best = max( best, eval_fo( sys, phi.arg(), inner ) );
        }
        return best;
    }
    case K::diamond_bind:
    {
        const StateId from = lookup( phi.var() );
        Rational sum;
        if ( const auto& succ = sys.successors( from ) )
        {
            Environment inner = env;
            for ( const auto& e : *succ )
            {
                inner[ phi.var2() ] = e.state;
                sum += e.weight * eval_fo( sys, phi.arg(), inner );
            }
        }
        return sum;
    }
    }
    fail( ErrorCode::internal, "unhandled formula kind" );
}

} // namespace ptsm
