#pragma once

#include "error.hpp"
#include "random.hpp"
#include "rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

namespace ptsm
{

/// Quantitative probabilistic modal formula.
///
/// Immutable and cheap to copy: nodes are shared, so synthesized formulas
/// are DAGs. Or and Box are kept as sugar; every operation treats them as
/// Or(a,b) = ~(~a & ~b) and Box a = ~<>~a.
class ModalFormula
{
public:
    enum class Kind
    {
        constant,
        atom,
        trunc_sub,
        negation,
        conjunction,
        disjunction,
        diamond,
        box
    };

private:
    struct Node;
    std::shared_ptr<const Node> _node;

    explicit ModalFormula( std::shared_ptr<const Node> node ) : _node( std::move( node ) ) {}

    static ModalFormula make( Kind kind, Rational value, std::string name, ModalFormula lhs, ModalFormula rhs );

public:
    ModalFormula() = default; // empty handle; only the builders produce formulas

    static ModalFormula constant( Rational c );
    static ModalFormula atom( std::string name );
    static ModalFormula trunc_sub( ModalFormula f, Rational c );
    static ModalFormula negation( ModalFormula f );
    static ModalFormula conjunction( ModalFormula a, ModalFormula b );
    static ModalFormula disjunction( ModalFormula a, ModalFormula b );
    static ModalFormula diamond( ModalFormula f );
    static ModalFormula box( ModalFormula f );

    bool valid() const noexcept { return _node != nullptr; }
    Kind kind() const;
    const Rational& value() const;   // constant, trunc_sub
    const std::string& name() const; // atom
    const ModalFormula& arg() const; // unary kinds, trunc_sub
    const ModalFormula& lhs() const;
    const ModalFormula& rhs() const;

    // Node identity, stable while any copy is alive; used for memoization.
    const void* identity() const noexcept { return _node.get(); }

    friend bool operator==( const ModalFormula& a, const ModalFormula& b );
};

struct ModalFormula::Node
{
    Kind kind;
    Rational value;
    std::string name;
    ModalFormula lhs;
    ModalFormula rhs;
};

inline ModalFormula ModalFormula::make( Kind kind, Rational value, std::string name, ModalFormula lhs,
                                        ModalFormula rhs )
{
    return ModalFormula(
        std::make_shared<const Node>( Node{ kind, std::move( value ), std::move( name ), std::move( lhs ), std::move( rhs ) } ) );
}

inline void check_formula_constant( const Rational& c )
{
    if ( !in_unit_interval( c ) )
        fail( ErrorCode::range, "formula constant " + c.str() + " outside [0,1]" );
}

inline ModalFormula ModalFormula::constant( Rational c )
{
    check_formula_constant( c );
    return make( Kind::constant, std::move( c ), {}, {}, {} );
}
inline ModalFormula ModalFormula::atom( std::string name ) { return make( Kind::atom, {}, std::move( name ), {}, {} ); }
inline ModalFormula ModalFormula::trunc_sub( ModalFormula f, Rational c )
{
    check_formula_constant( c );
    return make( Kind::trunc_sub, std::move( c ), {}, std::move( f ), {} );
}
inline ModalFormula ModalFormula::negation( ModalFormula f ) { return make( Kind::negation, {}, {}, std::move( f ), {} ); }
inline ModalFormula ModalFormula::conjunction( ModalFormula a, ModalFormula b )
{
    return make( Kind::conjunction, {}, {}, std::move( a ), std::move( b ) );
}
inline ModalFormula ModalFormula::disjunction( ModalFormula a, ModalFormula b )
{
    return make( Kind::disjunction, {}, {}, std::move( a ), std::move( b ) );
}
inline ModalFormula ModalFormula::diamond( ModalFormula f ) { return make( Kind::diamond, {}, {}, std::move( f ), {} ); }
inline ModalFormula ModalFormula::box( ModalFormula f ) { return make( Kind::box, {}, {}, std::move( f ), {} ); }

inline ModalFormula::Kind ModalFormula::kind() const { return _node->kind; }
inline const Rational& ModalFormula::value() const { return _node->value; }
inline const std::string& ModalFormula::name() const { return _node->name; }
inline const ModalFormula& ModalFormula::arg() const { return _node->lhs; }
inline const ModalFormula& ModalFormula::lhs() const { return _node->lhs; }
inline const ModalFormula& ModalFormula::rhs() const { return _node->rhs; }

inline bool operator==( const ModalFormula& a, const ModalFormula& b )
{
    if ( a._node == b._node )
        return true;
    if ( !a._node || !b._node )
        return false;
    const auto& x = *a._node;
    const auto& y = *b._node;
    return x.kind == y.kind && x.value == y.value && x.name == y.name && x.lhs == y.lhs && x.rhs == y.rhs;
}

/// Bottom-up fold over a formula DAG, visiting each shared node once.
template <typename T>
class ModalFold
{
    std::function<T( const ModalFormula&, ModalFold& )> _step;
    std::unordered_map<const void*, std::pair<ModalFormula, T>> _memo;

public:
    explicit ModalFold( std::function<T( const ModalFormula&, ModalFold& )> step ) : _step( std::move( step ) ) {}

    const T& operator()( const ModalFormula& f )
    {
        if ( auto it = _memo.find( f.identity() ); it != _memo.end() )
            return it->second.second;
        T value = _step( f, *this );
        return _memo.emplace( f.identity(), std::pair{ f, std::move( value ) } ).first->second.second;
    }
};

/// Maximal nesting depth of diamonds and atoms; negation and truncated
/// subtraction are transparent, constants have rank 0.
inline std::size_t modal_rank( const ModalFormula& f )
{
    using K = ModalFormula::Kind;
    ModalFold<std::size_t> fold( []( const ModalFormula& g, ModalFold<std::size_t>& rec ) -> std::size_t {
        switch ( g.kind() )
        {
        case K::constant: return 0;
        case K::atom: return 1;
        case K::trunc_sub:
        case K::negation: return rec( g.arg() );
        case K::conjunction:
        case K::disjunction: return std::max( rec( g.lhs() ), rec( g.rhs() ) );
        case K::diamond:
        case K::box: return 1 + rec( g.arg() );
        }
        return 0;
    } );
    return fold( f );
}

/// Number of distinct nodes (DAG size).
inline std::size_t node_count( const ModalFormula& f )
{
    std::set<const void*> seen;
    std::vector<ModalFormula> stack{ f };
    while ( !stack.empty() )
    {
        ModalFormula g = stack.back();
        stack.pop_back();
        if ( !seen.insert( g.identity() ).second )
            continue;
        if ( g.lhs().valid() )
            stack.push_back( g.lhs() );
        if ( g.rhs().valid() )
            stack.push_back( g.rhs() );
    }
    return seen.size();
}

/// Atom names occurring in the formula.
inline std::set<std::string> atoms_of( const ModalFormula& f )
{
    std::set<std::string> out;
    std::set<const void*> seen;
    std::vector<ModalFormula> stack{ f };
    while ( !stack.empty() )
    {
        ModalFormula g = stack.back();
        stack.pop_back();
        if ( !seen.insert( g.identity() ).second )
            continue;
        if ( g.kind() == ModalFormula::Kind::atom )
            out.insert( g.name() );
        if ( g.lhs().valid() )
            stack.push_back( g.lhs() );
        if ( g.rhs().valid() )
            stack.push_back( g.rhs() );
    }
    return out;
}

/// Rewrites Or and Box into the core connectives.
inline ModalFormula desugar( const ModalFormula& f )
{
    using K = ModalFormula::Kind;
    using M = ModalFormula;
    ModalFold<M> fold( []( const M& g, ModalFold<M>& rec ) -> M {
        switch ( g.kind() )
        {
        case K::constant:
        case K::atom: return g;
        case K::trunc_sub: return M::trunc_sub( rec( g.arg() ), g.value() );
        case K::negation: return M::negation( rec( g.arg() ) );
        case K::conjunction: return M::conjunction( rec( g.lhs() ), rec( g.rhs() ) );
        case K::disjunction:
            return M::negation( M::conjunction( M::negation( rec( g.lhs() ) ), M::negation( rec( g.rhs() ) ) ) );
        case K::diamond: return M::diamond( rec( g.arg() ) );
        case K::box: return M::negation( M::diamond( M::negation( rec( g.arg() ) ) ) );
        }
        return g;
    } );
    return fold( f );
}

/// Semantics-preserving cleanup: constant folding, double negation,
/// neutral and absorbing constants, idempotent and/or.
inline ModalFormula simplify( const ModalFormula& f )
{
    using K = ModalFormula::Kind;
    using M = ModalFormula;
    ModalFold<M> fold( []( const M& g, ModalFold<M>& rec ) -> M {
        auto is_const = []( const M& h ) { return h.kind() == K::constant; };
        switch ( g.kind() )
        {
        case K::constant:
        case K::atom: return g;
        case K::trunc_sub:
        {
            M a = rec( g.arg() );
            if ( g.value().is_zero() )
                return a;
            if ( is_const( a ) )
                return M::constant( max( a.value() - g.value(), Rational( 0 ) ) );
            if ( a.kind() == K::trunc_sub )
                return M::trunc_sub( a.arg(), min( a.value() + g.value(), Rational( 1 ) ) );
            return M::trunc_sub( a, g.value() );
        }
        case K::negation:
        {
            M a = rec( g.arg() );
            if ( is_const( a ) )
                return M::constant( Rational( 1 ) - a.value() );
            if ( a.kind() == K::negation )
                return a.arg();
            return M::negation( a );
        }
        case K::conjunction:
        case K::disjunction:
        {
            const bool conj = g.kind() == K::conjunction;
            M a = rec( g.lhs() );
            M b = rec( g.rhs() );
            if ( is_const( a ) && is_const( b ) )
                return M::constant( conj ? min( a.value(), b.value() ) : max( a.value(), b.value() ) );
            const Rational neutral = conj ? Rational( 1 ) : Rational( 0 );
            const Rational absorbing = conj ? Rational( 0 ) : Rational( 1 );
            for ( int side = 0; side < 2; ++side )
            {
                const M& c = side == 0 ? a : b;
                const M& other = side == 0 ? b : a;
                if ( is_const( c ) && c.value() == neutral )
                    return other;
                if ( is_const( c ) && c.value() == absorbing )
                    return c;
            }
            if ( a.identity() == b.identity() )
                return a;
            return conj ? M::conjunction( a, b ) : M::disjunction( a, b );
        }
        case K::diamond: return M::diamond( rec( g.arg() ) );
        case K::box: return M::box( rec( g.arg() ) );
        }
        return g;
    } );
    return fold( f );
}

// ---------------------------------------------------------------------------
// First-order logic

/// Quantitative probabilistic first-order formula. The binder form
/// `x:<>y. f` binds y (never x) and takes the expectation of f over the
/// successors y of x.
class FOFormula
{
public:
    enum class Kind
    {
        constant,
        atom,
        equality,
        trunc_sub,
        negation,
        conjunction,
        exists,
        diamond_bind
    };

private:
    struct Node;
    std::shared_ptr<const Node> _node;

    explicit FOFormula( std::shared_ptr<const Node> node ) : _node( std::move( node ) ) {}
    static FOFormula make( Kind kind, Rational value, std::string name, std::string var1, std::string var2,
                           FOFormula lhs, FOFormula rhs );

public:
    FOFormula() = default;

    static FOFormula constant( Rational c );
    static FOFormula atom( std::string name, std::string var );
    static FOFormula equality( std::string x, std::string y );
    static FOFormula trunc_sub( FOFormula f, Rational c );
    static FOFormula negation( FOFormula f );
    static FOFormula conjunction( FOFormula a, FOFormula b );
    static FOFormula exists( std::string var, FOFormula body );
    static FOFormula diamond_bind( std::string source, std::string bound, FOFormula body );

    bool valid() const noexcept { return _node != nullptr; }
    Kind kind() const;
    const Rational& value() const;
    const std::string& name() const;  // atom
    const std::string& var() const;   // atom variable, equality lhs, exists variable, diamond source
    const std::string& var2() const;  // equality rhs, diamond bound variable
    const FOFormula& arg() const;
    const FOFormula& lhs() const;
    const FOFormula& rhs() const;

    friend bool operator==( const FOFormula& a, const FOFormula& b );
};

struct FOFormula::Node
{
    Kind kind;
    Rational value;
    std::string name;
    std::string var1;
    std::string var2;
    FOFormula lhs;
    FOFormula rhs;
};

inline FOFormula FOFormula::make( Kind kind, Rational value, std::string name, std::string var1, std::string var2,
                                  FOFormula lhs, FOFormula rhs )
{
    return FOFormula( std::make_shared<const Node>( Node{ kind, std::move( value ), std::move( name ), std::move( var1 ),
                                                          std::move( var2 ), std::move( lhs ), std::move( rhs ) } ) );
}

inline FOFormula FOFormula::constant( Rational c )
{
    check_formula_constant( c );
    return make( Kind::constant, std::move( c ), {}, {}, {}, {}, {} );
}
inline FOFormula FOFormula::atom( std::string name, std::string var )
{
    return make( Kind::atom, {}, std::move( name ), std::move( var ), {}, {}, {} );
}
inline FOFormula FOFormula::equality( std::string x, std::string y )
{
    return make( Kind::equality, {}, {}, std::move( x ), std::move( y ), {}, {} );
}
inline FOFormula FOFormula::trunc_sub( FOFormula f, Rational c )
{
    check_formula_constant( c );
    return make( Kind::trunc_sub, std::move( c ), {}, {}, {}, std::move( f ), {} );
}
inline FOFormula FOFormula::negation( FOFormula f ) { return make( Kind::negation, {}, {}, {}, {}, std::move( f ), {} ); }
inline FOFormula FOFormula::conjunction( FOFormula a, FOFormula b )
{
    return make( Kind::conjunction, {}, {}, {}, {}, std::move( a ), std::move( b ) );
}
inline FOFormula FOFormula::exists( std::string var, FOFormula body )
{
    return make( Kind::exists, {}, {}, std::move( var ), {}, std::move( body ), {} );
}
inline FOFormula FOFormula::diamond_bind( std::string source, std::string bound, FOFormula body )
{
    if ( source == bound )
        fail( ErrorCode::syntax, "binder '" + source + ":<>" + bound + "' must bind a variable other than its source" );
    return make( Kind::diamond_bind, {}, {}, std::move( source ), std::move( bound ), std::move( body ), {} );
}

inline FOFormula::Kind FOFormula::kind() const { return _node->kind; }
inline const Rational& FOFormula::value() const { return _node->value; }
inline const std::string& FOFormula::name() const { return _node->name; }
inline const std::string& FOFormula::var() const { return _node->var1; }
inline const std::string& FOFormula::var2() const { return _node->var2; }
inline const FOFormula& FOFormula::arg() const { return _node->lhs; }
inline const FOFormula& FOFormula::lhs() const { return _node->lhs; }
inline const FOFormula& FOFormula::rhs() const { return _node->rhs; }

inline bool operator==( const FOFormula& a, const FOFormula& b )
{
    if ( a._node == b._node )
        return true;
    if ( !a._node || !b._node )
        return false;
    const auto& x = *a._node;
    const auto& y = *b._node;
    return x.kind == y.kind && x.value == y.value && x.name == y.name && x.var1 == y.var1 && x.var2 == y.var2
           && x.lhs == y.lhs && x.rhs == y.rhs;
}

/// Maximal nesting depth of exists, binder diamonds and atoms.
inline std::size_t quantifier_rank( const FOFormula& f )
{
    using K = FOFormula::Kind;
    switch ( f.kind() )
    {
    case K::constant:
    case K::equality: return 0;
    case K::atom: return 1;
    case K::trunc_sub:
    case K::negation: return quantifier_rank( f.arg() );
    case K::conjunction: return std::max( quantifier_rank( f.lhs() ), quantifier_rank( f.rhs() ) );
    case K::exists:
    case K::diamond_bind: return 1 + quantifier_rank( f.arg() );
    }
    return 0;
}

/// Free variables in order of first occurrence.
inline std::vector<std::string> free_variables( const FOFormula& f )
{
    using K = FOFormula::Kind;
    std::vector<std::string> out;
    std::vector<std::string> bound;
    auto note = [ & ]( const std::string& v ) {
        if ( std::find( bound.begin(), bound.end(), v ) == bound.end()
             && std::find( out.begin(), out.end(), v ) == out.end() )
            out.push_back( v );
    };
    std::function<void( const FOFormula& )> walk = [ & ]( const FOFormula& g ) {
        switch ( g.kind() )
        {
        case K::constant: break;
        case K::atom: note( g.var() ); break;
        case K::equality:
            note( g.var() );
            note( g.var2() );
            break;
        case K::trunc_sub:
        case K::negation: walk( g.arg() ); break;
        case K::conjunction:
            walk( g.lhs() );
            walk( g.rhs() );
            break;
        case K::exists:
            bound.push_back( g.var() );
            walk( g.arg() );
            bound.pop_back();
            break;
        case K::diamond_bind:
            note( g.var() );
            bound.push_back( g.var2() );
            walk( g.arg() );
            bound.pop_back();
            break;
        }
    };
    walk( f );
    return out;
}

/// Standard translation into first-order logic at variable `x`.
///
/// Each diamond gets its own bound variable, drawn from y, z, w, u, v and
/// then _v0, _v1, ...; names equal to `x` are skipped.
inline FOFormula standard_translation( const ModalFormula& phi, const std::string& x )
{
    using K = ModalFormula::Kind;
    using F = FOFormula;
    static const char* const preferred[] = { "y", "z", "w", "u", "v" };
    std::size_t next = 0;
    auto fresh = [ & ]() {
        for ( ;; )
        {
            std::size_t i = next++;
            std::string name = i < std::size( preferred ) ? preferred[ i ] : "_v" + std::to_string( i - std::size( preferred ) );
            if ( name != x )
                return name;
        }
    };
    std::function<F( const ModalFormula&, const std::string& )> st = [ & ]( const ModalFormula& f,
                                                                           const std::string& at ) -> F {
        switch ( f.kind() )
        {
        case K::constant: return F::constant( f.value() );
        case K::atom: return F::atom( f.name(), at );
        case K::trunc_sub: return F::trunc_sub( st( f.arg(), at ), f.value() );
        case K::negation: return F::negation( st( f.arg(), at ) );
        case K::conjunction:
        {
            F a = st( f.lhs(), at );
            return F::conjunction( std::move( a ), st( f.rhs(), at ) );
        }
        case K::diamond:
        {
            std::string y = fresh();
            return F::diamond_bind( at, y, st( f.arg(), y ) );
        }
        case K::disjunction:
        case K::box: break;
        }
        fail( ErrorCode::internal, "standard translation reached sugar after desugaring" );
    };
    return st( desugar( phi ), x );
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail
{
// Precedence levels: 1 or, 2 and, 3 truncated subtraction, 4 prefix, 5 atomic.
inline std::string wrap( std::string s, int have, int need )
{
    return have < need ? "(" + s + ")" : s;
}
} // namespace detail

inline std::string render( const ModalFormula& f, int need = 0 )
{
    using K = ModalFormula::Kind;
    switch ( f.kind() )
    {
    case K::constant: return f.value().str();
    case K::atom: return f.name();
    case K::trunc_sub: return detail::wrap( render( f.arg(), 3 ) + " -. " + f.value().str(), 3, need );
    case K::negation: return detail::wrap( "~" + render( f.arg(), 4 ), 4, need );
    case K::diamond: return detail::wrap( "<>" + render( f.arg(), 4 ), 4, need );
    case K::box: return detail::wrap( "[]" + render( f.arg(), 4 ), 4, need );
    case K::conjunction: return detail::wrap( render( f.lhs(), 2 ) + " & " + render( f.rhs(), 3 ), 2, need );
    case K::disjunction: return detail::wrap( render( f.lhs(), 1 ) + " | " + render( f.rhs(), 2 ), 1, need );
    }
    return {};
}

inline std::string render( const FOFormula& f, int need = 0 )
{
    using K = FOFormula::Kind;
    switch ( f.kind() )
    {
    case K::constant: return f.value().str();
    case K::atom: return f.name() + "(" + f.var() + ")";
    case K::equality: return detail::wrap( f.var() + " = " + f.var2(), 5, need );
    case K::trunc_sub: return detail::wrap( render( f.arg(), 3 ) + " -. " + f.value().str(), 3, need );
    case K::negation: return detail::wrap( "~" + render( f.arg(), 4 ), 4, need );
    case K::conjunction: return detail::wrap( render( f.lhs(), 2 ) + " & " + render( f.rhs(), 3 ), 2, need );
    case K::exists: return detail::wrap( "E" + f.var() + ". " + render( f.arg(), 4 ), 4, need );
    case K::diamond_bind:
        return detail::wrap( f.var() + ":<>" + f.var2() + ". " + render( f.arg(), 4 ), 4, need );
    }
    return {};
}

// ---------------------------------------------------------------------------
// JSON ASTs

inline nlohmann::ordered_json modal_to_json( const ModalFormula& f )
{
    using K = ModalFormula::Kind;
    nlohmann::ordered_json j;
    switch ( f.kind() )
    {
    case K::constant: j = { { "kind", "const" }, { "value", f.value().str() } }; break;
    case K::atom: j = { { "kind", "atom" }, { "name", f.name() } }; break;
    case K::trunc_sub: j = { { "kind", "truncsub" }, { "arg", modal_to_json( f.arg() ) }, { "value", f.value().str() } }; break;
    case K::negation: j = { { "kind", "neg" }, { "arg", modal_to_json( f.arg() ) } }; break;
    case K::diamond: j = { { "kind", "diamond" }, { "arg", modal_to_json( f.arg() ) } }; break;
    case K::box: j = { { "kind", "box" }, { "arg", modal_to_json( f.arg() ) } }; break;
    case K::conjunction:
    case K::disjunction:
        j = { { "kind", f.kind() == K::conjunction ? "and" : "or" },
              { "lhs", modal_to_json( f.lhs() ) },
              { "rhs", modal_to_json( f.rhs() ) } };
        break;
    }
    return j;
}

inline ModalFormula modal_from_json( const nlohmann::ordered_json& j )
{
    using M = ModalFormula;
    if ( !j.is_object() || !j.contains( "kind" ) )
        fail( ErrorCode::syntax, "formula JSON node needs a \"kind\"" );
    const std::string kind = j.at( "kind" ).get<std::string>();
    auto rat = [ & ]() { return Rational::parse( j.at( "value" ).get<std::string>() ); };
    if ( kind == "const" )
        return M::constant( rat() );
    if ( kind == "atom" )
        return M::atom( j.at( "name" ).get<std::string>() );
    if ( kind == "truncsub" )
        return M::trunc_sub( modal_from_json( j.at( "arg" ) ), rat() );
    if ( kind == "neg" )
        return M::negation( modal_from_json( j.at( "arg" ) ) );
    if ( kind == "diamond" )
        return M::diamond( modal_from_json( j.at( "arg" ) ) );
    if ( kind == "box" )
        return M::box( modal_from_json( j.at( "arg" ) ) );
    if ( kind == "and" )
        return M::conjunction( modal_from_json( j.at( "lhs" ) ), modal_from_json( j.at( "rhs" ) ) );
    if ( kind == "or" )
        return M::disjunction( modal_from_json( j.at( "lhs" ) ), modal_from_json( j.at( "rhs" ) ) );
    fail( ErrorCode::syntax, "unknown modal formula kind '" + kind + "'" );
}

inline nlohmann::ordered_json fo_to_json( const FOFormula& f )
{
    using K = FOFormula::Kind;
    nlohmann::ordered_json j;
    switch ( f.kind() )
    {
    case K::constant: j = { { "kind", "const" }, { "value", f.value().str() } }; break;
    case K::atom: j = { { "kind", "atom" }, { "name", f.name() }, { "var", f.var() } }; break;
    case K::equality: j = { { "kind", "eq" }, { "lhs", f.var() }, { "rhs", f.var2() } }; break;
    case K::trunc_sub: j = { { "kind", "truncsub" }, { "arg", fo_to_json( f.arg() ) }, { "value", f.value().str() } }; break;
    case K::negation: j = { { "kind", "neg" }, { "arg", fo_to_json( f.arg() ) } }; break;
    case K::conjunction: j = { { "kind", "and" }, { "lhs", fo_to_json( f.lhs() ) }, { "rhs", fo_to_json( f.rhs() ) } }; break;
    case K::exists: j = { { "kind", "exists" }, { "var", f.var() }, { "arg", fo_to_json( f.arg() ) } }; break;
    case K::diamond_bind:
        j = { { "kind", "diamond_bind" }, { "source", f.var() }, { "bound", f.var2() }, { "arg", fo_to_json( f.arg() ) } };
        break;
    }
    return j;
}

inline FOFormula fo_from_json( const nlohmann::ordered_json& j )
{
    using F = FOFormula;
    if ( !j.is_object() || !j.contains( "kind" ) )
        fail( ErrorCode::syntax, "formula JSON node needs a \"kind\"" );
    const std::string kind = j.at( "kind" ).get<std::string>();
    auto str = [ & ]( const char* key ) { return j.at( key ).get<std::string>(); };
    if ( kind == "const" )
        return F::constant( Rational::parse( str( "value" ) ) );
    if ( kind == "atom" )
        return F::atom( str( "name" ), str( "var" ) );
    if ( kind == "eq" )
        return F::equality( str( "lhs" ), str( "rhs" ) );
    if ( kind == "truncsub" )
        return F::trunc_sub( fo_from_json( j.at( "arg" ) ), Rational::parse( str( "value" ) ) );
    if ( kind == "neg" )
        return F::negation( fo_from_json( j.at( "arg" ) ) );
    if ( kind == "and" )
        return F::conjunction( fo_from_json( j.at( "lhs" ) ), fo_from_json( j.at( "rhs" ) ) );
    if ( kind == "exists" )
        return F::exists( str( "var" ), fo_from_json( j.at( "arg" ) ) );
    if ( kind == "diamond_bind" )
        return F::diamond_bind( str( "source" ), str( "bound" ), fo_from_json( j.at( "arg" ) ) );
    fail( ErrorCode::syntax, "unknown first-order formula kind '" + kind + "'" );
}

// ---------------------------------------------------------------------------
// Random formulas for property tests

struct RandomFormulaParams
{
    std::size_t max_rank = 3;
    std::size_t max_size = 12;       // rough bound on the number of nodes
    std::size_t constant_denominator = 8;
    bool allow_sugar = true;         // emit Or and Box as well
};

/// Random modal formula of rank at most params.max_rank over `atoms`.
inline ModalFormula random_modal_formula( Rng& rng, const std::vector<std::string>& atoms,
                                         const RandomFormulaParams& params )
{
    using M = ModalFormula;
    const auto den = static_cast<long>( params.constant_denominator );
    auto constant = [ & ]() { return Rational( static_cast<long>( rng.between( 0, den ) ), den ); };
    std::function<M( std::size_t, std::size_t )> gen = [ & ]( std::size_t rank, std::size_t budget ) -> M {
        const bool can_atom = rank >= 1 && !atoms.empty();
        if ( budget <= 1 )
        {
            if ( can_atom && rng.below( 3 ) != 0 )
                return M::atom( atoms[ rng.below( atoms.size() ) ] );
            return M::constant( constant() );
        }
        switch ( rng.below( params.allow_sugar ? 9 : 7 ) )
        {
        case 0:
            if ( can_atom )
                return M::atom( atoms[ rng.below( atoms.size() ) ] );
            return M::constant( constant() );
        case 1: return M::trunc_sub( gen( rank, budget - 1 ), constant() );
        case 2: return M::negation( gen( rank, budget - 1 ) );
        case 3:
        {
            std::size_t left = 1 + rng.below( budget - 1 );
            M a = gen( rank, left );
            return M::conjunction( std::move( a ), gen( rank, std::max<std::size_t>( 1, budget - 1 - left ) ) );
        }
        case 4:
        case 5:
        case 6:
            if ( rank >= 1 )
                return M::diamond( gen( rank - 1, budget - 1 ) );
            return M::negation( gen( rank, budget - 1 ) );
        case 7:
        {
            std::size_t left = 1 + rng.below( budget - 1 );
            M a = gen( rank, left );
            return M::disjunction( std::move( a ), gen( rank, std::max<std::size_t>( 1, budget - 1 - left ) ) );
        }
        default:
            if ( rank >= 1 )
                return M::box( gen( rank - 1, budget - 1 ) );
            return M::constant( constant() );
        }
    };
    return gen( params.max_rank, 1 + rng.below( params.max_size ) );
}

} // namespace ptsm
