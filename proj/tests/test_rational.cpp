#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace ptsm;
using ptsm::test::R;

TEST_CASE( "rationals are kept reduced" )
{
    CHECK( R( 2, 4 ).str() == "1/2" );
    CHECK( R( -3, -9 ).str() == "1/3" );
    CHECK( R( 4, 2 ).str() == "2" );
    CHECK( R( 0, 7 ).str() == "0" );
    CHECK( R( 1, -2 ).str() == "-1/2" );
}

TEST_CASE( "parsing accepts n and n/d only" )
{
    CHECK( Rational::parse( "3/16" ) == R( 3, 16 ) );
    CHECK( Rational::parse( "6/32" ) == R( 3, 16 ) );
    CHECK( Rational::parse( "-1/4" ) == R( -1, 4 ) );
    CHECK( Rational::parse( "1" ) == R( 1 ) );
    for ( const char* bad : { "0.5", "1e3", "", "/2", "1/", "1/0", " 1", "1 /2", "+1", "1/2/3" } )
    {
        INFO( bad );
        CHECK_FALSE( Rational::try_parse( bad ).has_value() );
        CHECK_THROWS_AS( Rational::parse( bad ), Error );
    }
}

TEST_CASE( "arithmetic is exact" )
{
    CHECK( R( 1, 3 ) + R( 1, 6 ) == R( 1, 2 ) );
    CHECK( R( 1, 4 ) - R( 1, 4 ) * R( 1, 4 ) == R( 3, 16 ) );
    CHECK( R( 3, 16 ) / R( 3, 4 ) == R( 1, 4 ) );
    CHECK( -R( 1, 2 ) == R( -1, 2 ) );
    CHECK_THROWS_AS( R( 1 ) / R( 0 ), Error );
    CHECK_THROWS_AS( R( 1, 0 ), Error );

    // 1/10 added ten times is exactly one, unlike the binary float
    Rational sum;
    for ( int i = 0; i < 10; ++i )
        sum += R( 1, 10 );
    CHECK( sum == R( 1 ) );
}

TEST_CASE( "ordering and helpers" )
{
    CHECK( R( 1, 3 ) < R( 1, 2 ) );
    CHECK( R( -1, 2 ) < R( 0 ) );
    CHECK( max( R( 1, 3 ), R( 2, 5 ) ) == R( 2, 5 ) );
    CHECK( min( R( 1, 3 ), R( 2, 5 ) ) == R( 1, 3 ) );
    CHECK( abs( R( -3, 7 ) ) == R( 3, 7 ) );
    CHECK( in_unit_interval( R( 0 ) ) );
    CHECK( in_unit_interval( R( 1 ) ) );
    CHECK_FALSE( in_unit_interval( R( 11, 10 ) ) );
    CHECK( clamp_unit( R( -1, 5 ) ) == R( 0 ) );
    CHECK( clamp_unit( R( 6, 5 ) ) == R( 1 ) );
}

TEST_CASE( "grid rounding" )
{
    const mpz_class n = 8;
    CHECK( R( 3, 16 ).floor_to( n ) == R( 1, 8 ) );
    CHECK( R( 3, 16 ).ceil_to( n ) == R( 1, 4 ) );
    CHECK( R( 1, 4 ).floor_to( n ) == R( 1, 4 ) );
    CHECK( R( 1, 4 ).ceil_to( n ) == R( 1, 4 ) );
    CHECK( R( 5, 32 ).nearest_to( n ) == R( 1, 8 ) );
    CHECK( R( 7, 32 ).nearest_to( n ) == R( 1, 4 ) );
    CHECK( R( -1, 16 ).floor_to( n ) == R( -1, 8 ) );
    CHECK( R( -1, 16 ).ceil_to( n ) == R( 0 ) );
}

TEST_CASE( "decimal rendering" )
{
    CHECK( R( 3, 16 ).decimal( 4 ) == "0.1875" );
    CHECK( R( 1, 3 ).decimal( 6 ) == "0.333333" );
    CHECK( R( 2, 3 ).decimal( 2 ) == "0.67" );
    CHECK( R( -1, 8 ).decimal( 3 ) == "-0.125" );
    CHECK( R( 1 ).decimal( 0 ) == "1" );
}
