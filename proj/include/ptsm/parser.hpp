#pragma once

#include "formula.hpp"

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace ptsm
{

namespace detail
{

enum class Tok
{
    end,
    ident,
    number,
    diamond,   // <>
    box,       // []
    tilde,     // ~
    amp,       // &
    bar,       // |
    monus,     // -.
    lparen,
    rparen,
    bind,      // :<>
    equals,
    dot
};

struct Token
{
    Tok kind;
    std::string text;
    std::size_t pos;
};

inline std::vector<Token> tokenize( std::string_view s )
{
    std::vector<Token> out;
    std::size_t i = 0;
    auto is_ident_start = []( char c ) { return std::isalpha( static_cast<unsigned char>( c ) ) || c == '_'; };
    auto is_ident_char = []( char c ) { return std::isalnum( static_cast<unsigned char>( c ) ) || c == '_'; };
    while ( i < s.size() )
    {
        const char c = s[ i ];
        if ( std::isspace( static_cast<unsigned char>( c ) ) )
        {
            ++i;
            continue;
        }
        const std::size_t start = i;
        auto starts = [ & ]( std::string_view lit ) { return s.substr( i, lit.size() ) == lit; };
        if ( starts( "<>" ) )
            out.push_back( { Tok::diamond, "<>", start } ), i += 2;
        else if ( starts( "[]" ) )
            out.push_back( { Tok::box, "[]", start } ), i += 2;
        else if ( starts( ":<>" ) )
            out.push_back( { Tok::bind, ":<>", start } ), i += 3;
        else if ( starts( "-." ) )
            out.push_back( { Tok::monus, "-.", start } ), i += 2;
        else if ( c == '~' )
            out.push_back( { Tok::tilde, "~", start } ), ++i;
        else if ( c == '&' )
            out.push_back( { Tok::amp, "&", start } ), ++i;
        else if ( c == '|' )
            out.push_back( { Tok::bar, "|", start } ), ++i;
        else if ( c == '(' )
            out.push_back( { Tok::lparen, "(", start } ), ++i;
        else if ( c == ')' )
            out.push_back( { Tok::rparen, ")", start } ), ++i;
        else if ( c == '=' )
            out.push_back( { Tok::equals, "=", start } ), ++i;
        else if ( c == '.' )
            out.push_back( { Tok::dot, ".", start } ), ++i;
        else if ( std::isdigit( static_cast<unsigned char>( c ) ) )
        {
            while ( i < s.size() && std::isdigit( static_cast<unsigned char>( s[ i ] ) ) )
                ++i;
            if ( i < s.size() && s[ i ] == '/' )
            {
                ++i;
                const std::size_t den = i;
                while ( i < s.size() && std::isdigit( static_cast<unsigned char>( s[ i ] ) ) )
                    ++i;
                if ( i == den )
                    throw Error( ErrorCode::syntax, "expected denominator digits", i );
            }
            out.push_back( { Tok::number, std::string( s.substr( start, i - start ) ), start } );
        }
        else if ( is_ident_start( c ) )
        {
            while ( i < s.size() && is_ident_char( s[ i ] ) )
                ++i;
            out.push_back( { Tok::ident, std::string( s.substr( start, i - start ) ), start } );
        }
        else
            throw Error( ErrorCode::syntax, std::string( "unexpected character '" ) + c + "'", start );
    }
    out.push_back( { Tok::end, "", s.size() } );
    return out;
}

class ParserBase
{
protected:
    std::vector<Token> _toks;
    std::size_t _at = 0;

    explicit ParserBase( std::string_view text ) : _toks( tokenize( text ) ) {}

    const Token& peek( std::size_t ahead = 0 ) const
    {
        return _toks[ std::min( _at + ahead, _toks.size() - 1 ) ];
    }
    Token take() { return _toks[ std::min( _at++, _toks.size() - 1 ) ]; }
    bool accept( Tok k )
    {
        if ( peek().kind != k )
            return false;
        ++_at;
        return true;
    }
    [[noreturn]] void unexpected( const std::string& wanted ) const
    {
        const Token& t = peek();
        throw Error( ErrorCode::syntax,
                     "expected " + wanted + ", found " + ( t.kind == Tok::end ? "end of input" : "'" + t.text + "'" ),
                     t.pos );
    }
    Token expect( Tok k, const std::string& wanted )
    {
        if ( peek().kind != k )
            unexpected( wanted );
        return take();
    }
    Rational rational( const Token& t ) const
    {
        Rational r = Rational::parse( t.text );
        if ( !in_unit_interval( r ) )
            throw Error( ErrorCode::range, "constant " + r.str() + " outside [0,1]", t.pos );
        return r;
    }
    void finish()
    {
        if ( peek().kind != Tok::end )
            unexpected( "end of input" );
    }
};

class ModalParser : ParserBase
{
    using M = ModalFormula;

public:
    explicit ModalParser( std::string_view text ) : ParserBase( text ) {}

    M run()
    {
        M f = disjunction();
        finish();
        return f;
    }

private:
    M disjunction()
    {
        M f = conjunction();
        while ( accept( Tok::bar ) )
            f = M::disjunction( f, conjunction() );
        return f;
    }
    M conjunction()
    {
        M f = postfix();
        while ( accept( Tok::amp ) )
            f = M::conjunction( f, postfix() );
        return f;
    }
    M postfix()
    {
        M f = unary();
        while ( accept( Tok::monus ) )
            f = M::trunc_sub( f, rational( expect( Tok::number, "a rational after '-.'" ) ) );
        return f;
    }
    M unary()
    {
        const Token& t = peek();
        switch ( t.kind )
        {
        case Tok::tilde: take(); return M::negation( unary() );
        case Tok::diamond: take(); return M::diamond( unary() );
        case Tok::box: take(); return M::box( unary() );
        case Tok::number: return M::constant( rational( take() ) );
        case Tok::ident: return M::atom( take().text );
        case Tok::lparen:
        {
            take();
            M f = disjunction();
            expect( Tok::rparen, "')'" );
            return f;
        }
        default: unexpected( "a formula" );
        }
    }
};

class FOParser : ParserBase
{
    using F = FOFormula;

public:
    explicit FOParser( std::string_view text ) : ParserBase( text ) {}

    F run()
    {
        F f = disjunction();
        finish();
        return f;
    }

private:
    static F make_or( F a, F b ) { return F::negation( F::conjunction( F::negation( std::move( a ) ), F::negation( std::move( b ) ) ) ); }

    F disjunction()
    {
        F f = conjunction();
        while ( accept( Tok::bar ) )
            f = make_or( f, conjunction() );
        return f;
    }
    F conjunction()
    {
        F f = postfix();
        while ( accept( Tok::amp ) )
            f = F::conjunction( f, postfix() );
        return f;
    }
    F postfix()
    {
        F f = unary();
        while ( accept( Tok::monus ) )
            f = F::trunc_sub( f, rational( expect( Tok::number, "a rational after '-.'" ) ) );
        return f;
    }
    F unary()
    {
        const Token& t = peek();
        switch ( t.kind )
        {
        case Tok::tilde: take(); return F::negation( unary() );
        case Tok::number: return F::constant( rational( take() ) );
        case Tok::lparen:
        {
            take();
            F f = disjunction();
            expect( Tok::rparen, "')'" );
            return f;
        }
        case Tok::diamond:
        case Tok::box:
            throw Error( ErrorCode::syntax, "'" + t.text + "' needs a source variable in first-order syntax (x:<>y. ...)",
                         t.pos );
        case Tok::ident: return from_ident();
        default: unexpected( "a formula" );
        }
    }
    F from_ident()
    {
        const Token id = take();
        // "Ex. f" arrives as one identifier followed by '.'.
        if ( id.text.size() > 1 && id.text[ 0 ] == 'E' && peek().kind == Tok::dot )
        {
            take();
            return F::exists( id.text.substr( 1 ), unary() );
        }
        if ( id.text == "E" && peek().kind == Tok::ident && peek( 1 ).kind == Tok::dot )
        {
            std::string var = take().text;
            take();
            return F::exists( var, unary() );
        }
        switch ( peek().kind )
        {
        case Tok::lparen:
        {
            take();
            std::string var = expect( Tok::ident, "a variable" ).text;
            expect( Tok::rparen, "')'" );
            return F::atom( id.text, var );
        }
        case Tok::equals:
            take();
            return F::equality( id.text, expect( Tok::ident, "a variable after '='" ).text );
        case Tok::bind:
        {
            take();
            const Token bound = expect( Tok::ident, "a bound variable after ':<>'" );
            expect( Tok::dot, "'.'" );
            if ( bound.text == id.text )
                throw Error( ErrorCode::syntax, "binder must bind a variable other than its source '" + id.text + "'",
                             bound.pos );
            return F::diamond_bind( id.text, bound.text, unary() );
        }
        default:
            throw Error( ErrorCode::syntax,
                         "identifier '" + id.text + "' must be followed by '(', '=' or ':<>' in first-order syntax",
                         id.pos );
        }
    }
};

} // namespace detail

/// Parses `f ::= rat | ident | f -. rat | ~f | f & f | f | f | <>f | []f | (f)`.
/// Prefix operators bind tightest, then `-.`, then `&`, then `|`; binary
/// operators associate to the left.
inline ModalFormula parse_modal( std::string_view text ) { return detail::ModalParser( text ).run(); }

struct ParsedFO
{
    FOFormula formula;
    std::vector<std::string> free_vars;
};

/// Parses the first-order syntax: modal connectives without `<>`/`[]`, plus
/// `p(x)`, `x = y`, `E x. f` (or `Ex. f`) and `x:<>y. f`. Binder bodies are
/// parsed at prefix level, so `Ex. p(x) & q(x)` is `(Ex. p(x)) & q(x)`.
/// `|` is rewritten as `~(~a & ~b)`.
inline ParsedFO parse_fo( std::string_view text )
{
    FOFormula f = detail::FOParser( text ).run();
    auto vars = free_variables( f );
    return { std::move( f ), std::move( vars ) };
}

} // namespace ptsm
