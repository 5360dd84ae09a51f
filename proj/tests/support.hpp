#pragma once

#include <ptsm/ptsm.hpp>

#include <string>

namespace ptsm::test
{

inline Rational R( long n, long d = 1 ) { return Rational( n, d ); }
inline Rational Q( const char* s ) { return Rational::parse( s ); }

// The ten-state x/y system with perturbation eps on the y side. Zero-weight
// edges (eps = 1/2) are simply left out by validation.
inline TransitionSystem xy_system( const Rational& eps )
{
    const Rational half( 1, 2 );
    RawSystem raw;
    for ( const char* side : { "x", "y" } )
    {
        const std::string s = side;
        const Rational lo = s == "x" ? half : half - eps;
        const Rational hi = s == "x" ? half : half + eps;
        StateId r = raw.add_state( s );
        StateId a1 = raw.add_state( s + "1" );
        StateId a2 = raw.add_state( s + "2" );
        raw.add_state( s + "3" );
        StateId a4 = raw.add_state( s + "4" );
        raw.add_edge( r, a1, lo );
        raw.add_edge( r, a2, hi );
        raw.add_edge( a1, a1 + 2, lo );
        raw.add_edge( a1, a4, hi );
        raw.add_edge( a2, a2, Rational( 1 ) );
        raw.add_edge( a4, a4, Rational( 1 ) );
    }
    return validate_system( raw );
}

// Deterministic chain s0 -> s1 -> ... -> s{n-1} (terminating), with p(si) = i/n.
inline TransitionSystem chain( long n )
{
    RawSystem raw;
    raw.atoms = { "p" };
    for ( long i = 0; i < n; ++i )
        raw.add_state( "s" + std::to_string( i ), { Rational( i, n ) } );
    for ( long i = 0; i + 1 < n; ++i )
        raw.add_edge( static_cast<StateId>( i ), static_cast<StateId>( i + 1 ), Rational( 1 ) );
    return validate_system( raw );
}

} // namespace ptsm::test
