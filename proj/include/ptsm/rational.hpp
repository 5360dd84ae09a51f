#pragma once

#include "error.hpp"

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

namespace ptsm
{

/// Exact rational number, always kept in canonical reduced form.
///
/// Thin value wrapper over GMP's mpq_class. Expression templates are not
/// exposed, so `auto` never captures a lazy expression.
class Rational
{
    mpq_class _q;

    explicit Rational( mpq_class q ) : _q( std::move( q ) ) { _q.canonicalize(); }

public:
    Rational() = default;
    Rational( long value ) : _q( value ) {}
    Rational( long num, long den )
    {
        if ( den == 0 )
            fail( ErrorCode::range, "zero denominator" );
        _q = mpq_class( num, den );
        _q.canonicalize();
    }

    static Rational from_mpq( const mpq_class& q ) { return Rational( mpq_class( q ) ); }

    // Accepts "n" or "n/d" with an optional leading '-'. Floats, exponents
    // and whitespace are rejected.
    static std::optional<Rational> try_parse( std::string_view text )
    {
        std::size_t i = 0;
        bool negative = false;
        if ( i < text.size() && text[ i ] == '-' )
        {
            negative = true;
            ++i;
        }
        auto digits = [ & ]( std::size_t from ) {
            std::size_t j = from;
            while ( j < text.size() && text[ j ] >= '0' && text[ j ] <= '9' )
                ++j;
            return j;
        };
        std::size_t num_end = digits( i );
        if ( num_end == i )
            return std::nullopt;
        std::string num( text.substr( i, num_end - i ) );
        std::string den = "1";
        if ( num_end < text.size() )
        {
            if ( text[ num_end ] != '/' )
                return std::nullopt;
            std::size_t den_end = digits( num_end + 1 );
            if ( den_end == num_end + 1 || den_end != text.size() )
                return std::nullopt;
            den = std::string( text.substr( num_end + 1, den_end - num_end - 1 ) );
        }
        mpz_class n( num, 10 );
        mpz_class d( den, 10 );
        if ( d == 0 )
            return std::nullopt;
        if ( negative )
            n = -n;
        return Rational( mpq_class( n, d ) );
    }

    static Rational parse( std::string_view text )
    {
        if ( auto r = try_parse( text ) )
            return *r;
        fail( ErrorCode::syntax, "malformed rational '" + std::string( text ) + "' (expected n or n/d)" );
    }

    const mpq_class& raw() const noexcept { return _q; }

    mpz_class numerator() const { return _q.get_num(); }
    mpz_class denominator() const { return _q.get_den(); }

    int sign() const { return sgn( _q ); }
    bool is_zero() const { return sgn( _q ) == 0; }

    std::string str() const
    {
        if ( _q.get_den() == 1 )
            return _q.get_num().get_str();
        return _q.get_num().get_str() + "/" + _q.get_den().get_str();
    }

    // Advisory decimal rendering, rounded half away from zero.
    std::string decimal( int places = 6 ) const
    {
        mpz_class scale = 1;
        for ( int k = 0; k < places; ++k )
            scale *= 10;
        mpq_class scaled = abs( _q ) * scale + mpq_class( 1, 2 );
        mpz_class whole = scaled.get_num() / scaled.get_den();
        std::string digits = whole.get_str();
        if ( static_cast<int>( digits.size() ) <= places )
            digits.insert( 0, places + 1 - digits.size(), '0' );
        std::string out = sgn( _q ) < 0 && whole != 0 ? "-" : "";
        out += digits.substr( 0, digits.size() - places );
        if ( places > 0 )
            out += "." + digits.substr( digits.size() - places );
        return out;
    }

    double to_double() const { return _q.get_d(); }

    Rational& operator+=( const Rational& o ) { _q += o._q; return *this; }
    Rational& operator-=( const Rational& o ) { _q -= o._q; return *this; }
    Rational& operator*=( const Rational& o ) { _q *= o._q; return *this; }
    Rational& operator/=( const Rational& o )
    {
        if ( o.is_zero() )
            fail( ErrorCode::internal, "division by zero" );
        _q /= o._q;
        return *this;
    }

    friend Rational operator+( Rational a, const Rational& b ) { return a += b; }
    friend Rational operator-( Rational a, const Rational& b ) { return a -= b; }
    friend Rational operator*( Rational a, const Rational& b ) { return a *= b; }
    friend Rational operator/( Rational a, const Rational& b ) { return a /= b; }
    friend Rational operator-( const Rational& a ) { return Rational( mpq_class( -a._q ) ); }

    friend bool operator==( const Rational& a, const Rational& b ) { return cmp( a._q, b._q ) == 0; }
    friend std::strong_ordering operator<=>( const Rational& a, const Rational& b )
    {
        int c = cmp( a._q, b._q );
        return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<( std::ostream& os, const Rational& r ) { return os << r.str(); }

    // Grid rounding onto multiples of 1/n.
    Rational floor_to( const mpz_class& n ) const
    {
        mpq_class scaled = _q * n;
        mpz_class f;
        mpz_fdiv_q( f.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t() );
        return Rational( mpq_class( f, n ) );
    }
    Rational ceil_to( const mpz_class& n ) const
    {
        mpq_class scaled = _q * n;
        mpz_class c;
        mpz_cdiv_q( c.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t() );
        return Rational( mpq_class( c, n ) );
    }
    Rational nearest_to( const mpz_class& n ) const
    {
        return ( *this + Rational( mpq_class( 1, 2 ) ) / Rational( mpq_class( n ) ) ).floor_to( n );
    }
};

inline Rational abs( const Rational& r ) { return r.sign() < 0 ? -r : r; }
inline const Rational& min( const Rational& a, const Rational& b ) { return b < a ? b : a; }
inline const Rational& max( const Rational& a, const Rational& b ) { return a < b ? b : a; }

inline bool in_unit_interval( const Rational& r ) { return r.sign() >= 0 && r <= Rational( 1 ); }

inline Rational clamp_unit( const Rational& r )
{
    if ( r.sign() < 0 )
        return Rational( 0 );
    if ( r > Rational( 1 ) )
        return Rational( 1 );
    return r;
}

} // namespace ptsm
