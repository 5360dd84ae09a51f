#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace ptsm;
using ptsm::test::R;
using M = ModalFormula;

namespace
{

Rational sup_error( const TransitionSystem& sys, const M& phi, const std::vector<Rational>& f )
{
    auto v = eval_modal_all( sys, phi );
    Rational worst;
    for ( StateId s = 0; s < v.size(); ++s )
        worst = max( worst, abs( v[ s ] - f[ s ] ) );
    return worst;
}

bool constants_in_range( const M& phi )
{
    bool ok = true;
    ModalFold<int> walk( [ & ]( const M& g, ModalFold<int>& rec ) {
        if ( g.kind() == M::Kind::constant || g.kind() == M::Kind::trunc_sub )
            ok = ok && in_unit_interval( g.value() );
        if ( g.lhs().valid() )
            rec( g.lhs() );
        if ( g.rhs().valid() )
            rec( g.rhs() );
        return 0;
    } );
    walk( phi );
    return ok;
}

TransitionSystem two_point()
{
    RawSystem raw;
    raw.atoms = { "p" };
    raw.add_state( "a", { R( 1 ) } );
    raw.add_state( "b", { R( 0 ) } );
    return validate_system( raw );
}

} // namespace

TEST_CASE( "state functions must be non-expansive" )
{
    auto sys = two_point();
    auto chain = behavioural_distance( sys, 1, LiftMethod::kantorovich );
    CHECK_NOTHROW( StateFunction::make( chain, { R( 1 ), R( 0 ) }, 1 ) );
    try
    {
        StateFunction::make( chain, { R( 1 ), R( 0 ) }, 0 );
        FAIL( "accepted an expansive function" );
    }
    catch ( const Error& e )
    {
        CHECK( e.code() == ErrorCode::not_nonexpansive );
    }
    CHECK_THROWS_AS( StateFunction::make( chain, { R( 2 ), R( 0 ) }, 1 ), Error );
}

TEST_CASE( "pair approximation" )
{
    auto sys = two_point();
    auto chain = behavioural_distance( sys, 1, LiftMethod::kantorovich );

    // f = p is reproduced exactly
    auto f = StateFunction::make( chain, { R( 1 ), R( 0 ) }, 1 );
    auto phi = pair_approximation( chain, f, 0, 1, R( 1, 8 ) );
    CHECK( eval_modal( sys, phi, 0 ) == R( 1 ) );
    CHECK( eval_modal( sys, phi, 1 ) == R( 0 ) );
    CHECK( modal_rank( phi ) <= 1 );

    // constants
    auto c = StateFunction::make( chain, { R( 1, 3 ), R( 1, 3 ) }, 1 );
    auto pc = pair_approximation( chain, c, 0, 1, R( 1, 8 ) );
    CHECK( pc.kind() == M::Kind::constant );
    CHECK( abs( pc.value() - R( 1, 3 ) ) <= R( 1, 8 ) );
    auto same = pair_approximation( chain, f, 0, 0, R( 1, 8 ) );
    CHECK( same.kind() == M::Kind::constant );
    CHECK( abs( same.value() - R( 1 ) ) <= R( 1, 8 ) );

    try
    {
        pair_approximation( chain, f, 0, 1, R( 0 ) );
        FAIL( "zero slack accepted" );
    }
    catch ( const Error& e )
    {
        CHECK( e.code() == ErrorCode::slack_too_small );
    }
}

TEST_CASE( "witness formulas" )
{
    auto sys = two_point();
    auto w0 = witness_formula( sys, sys, 0, 1, 0, R( 1, 8 ) );
    CHECK( w0.formula == M::constant( R( 0 ) ) );
    auto w1 = witness_formula( sys, sys, 0, 1, 1, R( 1, 8 ) );
    CHECK( w1.formula == M::atom( "p" ) );
    CHECK( w1.gap == R( 1 ) );
    CHECK( w1.distance == R( 1 ) );

    auto xy = test::xy_system( R( 1, 4 ) );
    auto w = witness_formula( xy, xy, xy.state( "x" ), xy.state( "y" ), 3, R( 1, 32 ) );
    CHECK( w.distance == R( 3, 16 ) );
    CHECK( w.gap >= R( 3, 16 ) - R( 1, 32 ) );
    CHECK( w.gap <= R( 3, 16 ) );
    CHECK( modal_rank( w.formula ) <= 3 );
    CHECK( constants_in_range( w.formula ) );
    INFO( render( w.formula ) );

    auto same = witness_formula( xy, xy, xy.state( "x" ), xy.state( "x" ), 3, R( 1, 32 ) );
    CHECK( same.gap == R( 0 ) );
    CHECK( same.formula.kind() == M::Kind::constant );

    CHECK_THROWS_AS( witness_formula( xy, xy, 0, 1, 3, R( 0 ) ), Error );
}

TEST_CASE( "witnesses on random systems bracket the distance" )
{
    for ( std::uint64_t seed = 0; seed < 12; ++seed )
    {
        auto sys = random_system( { 6, 1 + seed % 2, 3, 8, R( 1, 5 ) }, 900 + seed );
        for ( std::size_t n = 1; n <= 3; ++n )
        {
            auto chain = behavioural_distance( sys, n, LiftMethod::kantorovich );
            Synthesizer synth( chain );
            for ( StateId a = 0; a < 6; ++a )
                for ( StateId b = a + 1; b < 6; ++b )
                {
                    for ( const Rational& delta : { R( 1, 16 ), R( 1, 64 ) } )
                    {
                        auto phi = synth.witness( a, b, n, delta );
                        const Rational gap = abs( eval_modal( sys, phi, a ) - eval_modal( sys, phi, b ) );
                        CHECK( gap >= chain.at( n )( a, b ) - delta );
                        CHECK( gap <= chain.at( n )( a, b ) );
                        CHECK( modal_rank( phi ) <= n );
                    }
                }
        }
    }
}

TEST_CASE( "approximating non-expansive functions" )
{
    auto xy = test::xy_system( R( 1, 4 ) );
    auto chain = behavioural_distance( xy, 3, LiftMethod::kantorovich );

    // the optimal price function of the depth-3 program at (x, y), extended to all states
    auto lift = kantorovich_lift( chain.at( 2 ), xy.successors( xy.state( "x" ) ), xy.successors( xy.state( "y" ) ) );
    CHECK( lift.value == R( 3, 16 ) );
    std::vector<Rational> f( xy.state_count() );
    for ( StateId s = 0; s < f.size(); ++s )
    {
        Rational v( 1 );
        for ( std::size_t i = 0; i < lift.price.domain.size(); ++i )
            v = min( v, lift.price.values[ i ] + chain.at( 2 )( s, lift.price.domain[ i ] ) );
        f[ s ] = v;
    }
    auto sf = StateFunction::make( chain, f, 2 );
    for ( const Rational& delta : { R( 1, 16 ), R( 1, 64 ) } )
    {
        auto phi = approximate_nonexpansive( chain, sf, delta );
        CHECK( sup_error( xy, phi, f ) <= delta );
        CHECK( modal_rank( phi ) <= 2 );
    }

    // a constant
    auto c = StateFunction::make( chain, std::vector<Rational>( xy.state_count(), R( 2, 7 ) ), 2 );
    auto pc = approximate_nonexpansive( chain, c, R( 1, 16 ) );
    CHECK( pc.kind() == M::Kind::constant );

    // values of an existing formula
    Rng rng( 12 );
    for ( int i = 0; i < 10; ++i )
    {
        auto psi = random_modal_formula( rng, {}, { 3, 10, 4, true } );
        auto target = eval_modal_all( xy, psi );
        auto sf3 = StateFunction::make( chain, target, 3 );
        auto phi = approximate_nonexpansive( chain, sf3, R( 1, 32 ) );
        CHECK( sup_error( xy, phi, target ) <= R( 1, 32 ) );
        CHECK( modal_rank( phi ) <= 3 );
    }
}
