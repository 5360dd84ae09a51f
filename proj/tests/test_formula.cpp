#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace ptsm;
using ptsm::test::R;
using M = ModalFormula;
using F = FOFormula;

TEST_CASE( "modal parsing" )
{
    CHECK( parse_modal( "<><>[]0" ) == M::diamond( M::diamond( M::box( M::constant( R( 0 ) ) ) ) ) );
    CHECK( parse_modal( "1/2" ) == M::constant( R( 1, 2 ) ) );

    auto f = parse_modal( "<>p & <>q" );
    CHECK( f == M::conjunction( M::diamond( M::atom( "p" ) ), M::diamond( M::atom( "q" ) ) ) );
    CHECK( modal_rank( f ) == 2 );

    // precedence and associativity
    auto p = M::atom( "p" ), q = M::atom( "q" ), r = M::atom( "r" );
    CHECK( parse_modal( "p | q & r" ) == M::disjunction( p, M::conjunction( q, r ) ) );
    CHECK( parse_modal( "p & q & r" ) == M::conjunction( M::conjunction( p, q ), r ) );
    CHECK( parse_modal( "~p -. 1/4" ) == M::trunc_sub( M::negation( p ), R( 1, 4 ) ) );
    CHECK( parse_modal( "p -. 1/4 & q" ) == M::conjunction( M::trunc_sub( p, R( 1, 4 ) ), q ) );
    CHECK( parse_modal( "p -. 1/4 -. 1/2" ) == M::trunc_sub( M::trunc_sub( p, R( 1, 4 ) ), R( 1, 2 ) ) );
    CHECK( parse_modal( "~(p & q)" ) == M::negation( M::conjunction( p, q ) ) );
}

TEST_CASE( "modal parse errors" )
{
    auto position = []( const char* text ) -> std::optional<std::size_t> {
        try
        {
            parse_modal( text );
        }
        catch ( const Error& e )
        {
            CHECK( e.code() == ErrorCode::syntax );
            return e.position();
        }
        return std::nullopt;
    };
    CHECK( position( "p &" ) == 3u );
    CHECK( position( "(p" ) == 2u );
    CHECK( position( "p q" ) == 2u );
    CHECK( position( "p -. q" ) == 5u );
    CHECK( position( "0.5" ) == 1u );
    CHECK( position( "p $ q" ) == 2u );

    try
    {
        parse_modal( "<>3/2" );
        FAIL( "accepted 3/2" );
    }
    catch ( const Error& e )
    {
        CHECK( e.code() == ErrorCode::range );
        CHECK( e.position() == 2u );
    }
    CHECK_THROWS_AS( M::constant( R( -1, 2 ) ), Error );
}

TEST_CASE( "modal rank" )
{
    CHECK( modal_rank( parse_modal( "<><>p & <>q" ) ) == 3 );
    CHECK( modal_rank( parse_modal( "1/3" ) ) == 0 );
    CHECK( modal_rank( parse_modal( "~(p -. 1/4)" ) ) == 1 );
    CHECK( modal_rank( parse_modal( "[][]0" ) ) == 2 );
    CHECK( modal_rank( parse_modal( "p | <>q" ) ) == 2 );
}

TEST_CASE( "rendering" )
{
    CHECK( render( M::diamond( M::atom( "p" ) ) ) == "<>p" );
    CHECK( render( parse_modal( "~(p & q)" ) ) == "~(p & q)" );
    CHECK( render( parse_modal( "p & (q & r)" ) ) == "p & (q & r)" );
    CHECK( render( parse_modal( "(p & q) & r" ) ) == "p & q & r" );
    CHECK( render( parse_modal( "(p | q) -. 1/2" ) ) == "(p | q) -. 1/2" );
    CHECK( render( parse_modal( "<>(p -. 1/2)" ) ) == "<>(p -. 1/2)" );

    Rng rng( 7 );
    const std::vector<std::string> atoms{ "p", "q", "r" };
    for ( int i = 0; i < 1000; ++i )
    {
        auto f = random_modal_formula( rng, atoms, { 3, 14, 6, true } );
        auto text = render( f );
        INFO( text );
        CHECK( parse_modal( text ) == f );
        CHECK( modal_from_json( modal_to_json( f ) ) == f );
    }
}

TEST_CASE( "first-order parsing" )
{
    auto ex = parse_fo( "Ex. x:<>y. p(y)" );
    CHECK( ex.formula == F::exists( "x", F::diamond_bind( "x", "y", F::atom( "p", "y" ) ) ) );
    CHECK( quantifier_rank( ex.formula ) == 3 );
    CHECK( ex.free_vars.empty() );
    CHECK( parse_fo( "E x. x:<>y. p(y)" ).formula == ex.formula );

    CHECK( parse_fo( "x = x" ).formula == F::equality( "x", "x" ) );
    CHECK( quantifier_rank( F::equality( "x", "y" ) ) == 0 );

    auto tp = parse_fo( "x:<>z. z = y" );
    CHECK( tp.formula == F::diamond_bind( "x", "z", F::equality( "z", "y" ) ) );
    CHECK( tp.free_vars == std::vector<std::string>{ "x", "y" } );
    CHECK( quantifier_rank( tp.formula ) == 1 );

    // binder bodies are prefix-level
    CHECK( parse_fo( "Ex. p(x) & q(y)" ).formula
           == F::conjunction( F::exists( "x", F::atom( "p", "x" ) ), F::atom( "q", "y" ) ) );

    // disjunction is rewritten
    CHECK( parse_fo( "p(x) | q(x)" ).formula
           == F::negation( F::conjunction( F::negation( F::atom( "p", "x" ) ), F::negation( F::atom( "q", "x" ) ) ) ) );

    CHECK_THROWS_AS( parse_fo( "x:<>x. p(x)" ), Error );
    CHECK_THROWS_AS( parse_fo( "<>p(x)" ), Error );
    CHECK_THROWS_AS( parse_fo( "p" ), Error );
    CHECK_THROWS_AS( F::diamond_bind( "x", "x", F::constant( R( 0 ) ) ), Error );
}

TEST_CASE( "standard translation" )
{
    auto st = standard_translation( parse_modal( "<>p" ), "x" );
    CHECK( st == F::diamond_bind( "x", "y", F::atom( "p", "y" ) ) );
    CHECK( render( st ) == "x:<>y. p(y)" );

    CHECK( standard_translation( M::constant( R( 1, 2 ) ), "x" ) == F::constant( R( 1, 2 ) ) );

    auto boxy = standard_translation( parse_modal( "<><>[]0" ), "x" );
    CHECK( render( boxy ) == "x:<>y. y:<>z. ~z:<>w. ~0" );
    CHECK( parse_fo( render( boxy ) ).formula == boxy );

    // fresh names never collide with the free variable
    auto st_y = standard_translation( parse_modal( "<><>p" ), "y" );
    CHECK( render( st_y ) == "y:<>z. z:<>w. p(w)" );

    // past the preferred names
    auto deep = standard_translation( parse_modal( "<><><><><><>p" ), "x" );
    CHECK( render( deep ) == "x:<>y. y:<>z. z:<>w. w:<>u. u:<>v. v:<>_v0. p(_v0)" );

    Rng rng( 3 );
    const std::vector<std::string> atoms{ "p", "q" };
    for ( int i = 0; i < 300; ++i )
    {
        auto f = random_modal_formula( rng, atoms, { 4, 16, 4, true } );
        auto g = standard_translation( f, "x" );
        INFO( render( f ) );
        CHECK( quantifier_rank( g ) == modal_rank( f ) );
        auto free = free_variables( g );
        CHECK( ( free.empty() || free == std::vector<std::string>{ "x" } ) );
        CHECK( parse_fo( render( g ) ).formula == g );
        CHECK( fo_from_json( fo_to_json( g ) ) == g );
    }
}

TEST_CASE( "simplification" )
{
    CHECK( simplify( parse_modal( "~~p" ) ) == M::atom( "p" ) );
    CHECK( simplify( parse_modal( "p & 1" ) ) == M::atom( "p" ) );
    CHECK( simplify( parse_modal( "p & 0" ) ) == M::constant( R( 0 ) ) );
    CHECK( simplify( parse_modal( "p | 1" ) ) == M::constant( R( 1 ) ) );
    CHECK( simplify( parse_modal( "~1/4 -. 1/2" ) ) == M::constant( R( 1, 4 ) ) );
    CHECK( simplify( parse_modal( "p -. 1/4 -. 1/4" ) ) == parse_modal( "p -. 1/2" ) );

    // shared nodes stay shared
    auto s = M::diamond( M::atom( "p" ) );
    auto f = M::conjunction( M::negation( M::negation( s ) ), s );
    auto g = simplify( f );
    CHECK( g.kind() == M::Kind::diamond );
}
