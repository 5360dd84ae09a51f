// Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
// criterion fails. Usage: acceptance <fixtures-dir>

#include <ptsm/ptsm.hpp>

#include <chrono>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace ptsm;

namespace
{

Rational R( long n, long d = 1 ) { return Rational( n, d ); }

// Collects failures; a criterion passes when none were recorded and the
// minimum counts were reached.
struct Tally
{
    std::size_t failures = 0;
    std::string first;
    std::map<std::string, std::size_t> counts;

    void expect( bool ok, const std::function<std::string()>& what )
    {
        if ( ok )
            return;
        if ( failures++ == 0 )
            first = what();
    }

    void count( const std::string& key, std::size_t n = 1 ) { counts[ key ] += n; }

    void at_least( const std::string& key, std::size_t n )
    {
        expect( counts[ key ] >= n,
                [ & ] { return key + ": " + std::to_string( counts[ key ] ) + " < " + std::to_string( n ); } );
    }

    std::string summary() const
    {
        std::ostringstream out;
        bool sep = false;
        for ( const auto& [ k, v ] : counts )
        {
            out << ( sep ? ", " : "" ) << k << "=" << v;
            sep = true;
        }
        return out.str();
    }
};

// Expectation of f under the successor distribution (0 when terminating)
Rational expect_under( const TransitionSystem& sys, StateId s, const std::vector<Rational>& f )
{
    Rational v;
    if ( const auto& succ = sys.successors( s ) )
        for ( const auto& e : *succ )
            v += e.weight * f[ e.state ];
    return v;
}

Rational sup_distance( const std::vector<Rational>& f, const std::vector<Rational>& g )
{
    Rational m;
    for ( std::size_t i = 0; i < f.size(); ++i )
        m = max( m, abs( f[ i ] - g[ i ] ) );
    return m;
}

RandomSystemParams random_params( Rng& rng, std::size_t max_states )
{
    return { 2 + rng.below( max_states - 1 ), 1 + rng.below( 2 ), 1 + rng.below( 3 ), 2 + rng.below( 15 ),
             R( 1, 5 ) };
}

// -------------------------------------------------------------------------

void criterion1( Tally& t, const std::string& fixtures )
{
    const std::pair<const char*, Rational> cases[] = {
        { "0", R( 0 ) }, { "1_10", R( 1, 10 ) }, { "1_4", R( 1, 4 ) }, { "1_2", R( 1, 2 ) } };
    for ( const auto& [ name, eps ] : cases )
    {
        auto sys = load_system( fixtures + "/xy_eps_" + name + ".json" );
        auto chain = behavioural_distance( sys, 3, LiftMethod::wasserstein );
        const Rational d3 = chain.at( 3 )( sys.state( "x" ), sys.state( "y" ) );
        t.expect( d3 == eps - eps * eps, [ & ] { return std::string( "d_3(x,y) at eps " ) + name + " is " + d3.str(); } );
        const std::tuple<const char*, const char*, Rational> table[] = {
            { "x1", "y1", eps }, { "x1", "y2", R( 1, 2 ) }, { "x2", "y1", R( 1, 2 ) - eps }, { "x2", "y2", R( 0 ) } };
        for ( const auto& [ a, b, want ] : table )
        {
            const Rational got = chain.at( 2 )( sys.state( a ), sys.state( b ) );
            t.expect( got == want, [ & ] {
                return std::string( "d_2(" ) + a + "," + b + ") at eps " + name + " is " + got.str();
            } );
            t.count( "table_entries" );
        }
        t.count( "eps_values" );
    }
    t.at_least( "eps_values", 4 );
}

void criterion2( Tally& t )
{
    Rng rng( 2002 );
    for ( std::size_t i = 0; i < 60; ++i )
    {
        auto A = random_system( random_params( rng, 12 ), rng.engine()() );
        auto p = random_params( rng, 12 );
        p.n_atoms = A.atoms().size();
        auto B = random_system( p, rng.engine()() );
        auto U = disjoint_union( { &A, &B } );
        const StateId off = U.offsets[ 1 ];
        const auto W = behavioural_distance( U.system, 4, LiftMethod::wasserstein );
        const auto K = behavioural_distance( U.system, 4, LiftMethod::kantorovich );
        for ( std::size_t n = 0; n <= 4; ++n )
            for ( StateId a = 0; a < U.system.state_count(); ++a )
                for ( StateId b = 0; b < U.system.state_count(); ++b )
                {
                    t.expect( W.at( n )( a, b ) == K.at( n )( a, b ), [ & ] {
                        return "W != K at system pair " + std::to_string( i ) + ", depth " + std::to_string( n );
                    } );
                    t.count( "W=K entries" );
                }

        for ( int k = 0; k < 4; ++k )
        {
            const StateId a = rng.below( A.state_count() ), b = rng.below( B.state_count() );
            const std::size_t n = rng.below( 5 );
            const Rational g = game_distance( A, B, a, b, n );
            t.expect( g == W.at( n )( a, off + b ), [ & ] { return "game value differs at pair " + std::to_string( i ); } );
            t.count( "game values" );
        }

        // logical lower bound from random formulas never exceeds d_n
        const StateId a = rng.below( A.state_count() ), b = rng.below( B.state_count() );
        const std::size_t n = 1 + i % 4;
        std::vector<ModalFormula> formulas;
        for ( int k = 0; k < 10; ++k )
            formulas.push_back( random_modal_formula( rng, A.atoms(), { n, 14, 16, true } ) );
        const Rational lb = logical_distance_lb( A, B, a, b, formulas, n );
        const Rational d = W.at( n )( a, off + b );
        t.expect( lb <= d, [ & ] { return "logical lower bound " + lb.str() + " above d_n " + d.str(); } );
        t.count( "logical_lb pairs" );

        if ( i < 20 )
        {
            auto w = witness_formula( A, B, a, b, n, R( 1, 64 ) );
            t.expect( w.distance == d, [ & ] { return std::string( "witness distance mismatch" ); } );
            t.expect( w.gap >= d - R( 1, 64 ) && w.gap <= d && modal_rank( w.formula ) <= n, [ & ] {
                return "witness gap " + w.gap.str() + " outside [d - 1/64, d] for d = " + d.str();
            } );
            t.count( "witness pairs" );
        }
        t.count( "system pairs" );
    }
    t.at_least( "system pairs", 50 );
    t.at_least( "witness pairs", 10 );
}

void criterion3( Tally& t )
{
    Rng rng( 3003 );
    for ( std::size_t i = 0; i < 240; ++i )
    {
        const std::size_t n = 1 + rng.below( 9 );
        auto d = random_pseudometric( rng, n, 1 + rng.below( 16 ) );
        auto side = [ & ]() -> Successors {
            if ( rng.below( 12 ) == 0 )
                return std::nullopt;
            return random_distribution( rng, n, 1 + rng.below( n ), 1 + rng.below( 16 ) );
        };
        const Successors p1 = side(), p2 = side();
        const Rational gap = duality_gap( d, p1, p2 );
        t.expect( gap.is_zero(), [ & ] { return "duality gap " + gap.str() + " at instance " + std::to_string( i ); } );
        t.count( "instances" );
    }
    t.at_least( "instances", 200 );
}

void criterion4( Tally& t )
{
    Rng rng( 4004 );
    std::size_t refusals = 0;
    for ( std::size_t i = 0; i < 120; ++i )
    {
        auto A = random_system( random_params( rng, 8 ), rng.engine()() );
        auto p = random_params( rng, 8 );
        p.n_atoms = A.atoms().size();
        auto B = random_system( p, rng.engine()() );
        const StateId a = rng.below( A.state_count() ), b = rng.below( B.state_count() );
        const std::size_t n = 1 + rng.below( 4 );
        const Rational d = behavioural_distance( A, B, n, LiftMethod::wasserstein ).cross( n, a, b );
        for ( const Rational& eps : { d, min( R( 1 ), d + R( 1, 1000 ) ) } )
        {
            auto cert = synthesize_duplicator_strategy( A, B, a, b, n, eps );
            const bool ok = verify_certificate( cert, A, B ).ok && exhaustive_spoiler( cert, A, B );
            t.expect( ok, [ & ] { return "certificate rejected at eps " + eps.str() + ", sample " + std::to_string( i ); } );
        }
        const Rational below = d - R( 1, 1000 );
        if ( d.sign() > 0 && below.sign() >= 0 )
        {
            bool refused = false;
            try
            {
                synthesize_duplicator_strategy( A, B, a, b, n, below );
            }
            catch ( const Error& e )
            {
                refused = e.code() == ErrorCode::not_winnable;
            }
            t.expect( refused, [ & ] { return "synthesis accepted below d_n at sample " + std::to_string( i ); } );
            ++refusals;
        }
        t.count( "samples" );
    }
    t.count( "refusals", refusals );
    t.at_least( "samples", 100 );
}

void criterion5( Tally& t )
{
    Rng rng( 5005 );
    for ( std::size_t i = 0; i < 25; ++i )
    {
        auto sys = random_system( random_params( rng, 10 ), rng.engine()() );
        const auto chain = behavioural_distance( sys, 4, LiftMethod::wasserstein );
        ModalEvaluator eval( sys );
        for ( int k = 0; k < 24; ++k )
        {
            auto phi = random_modal_formula( rng, sys.atoms(), { 4, 16, 16, true } );
            const std::size_t r = modal_rank( phi );
            const auto& v = eval.values( phi );
            for ( StateId a = 0; a < sys.state_count(); ++a )
                for ( StateId b = a + 1; b < sys.state_count(); ++b )
                    t.expect( abs( v[ a ] - v[ b ] ) <= chain.at( r )( a, b ), [ & ] {
                        return "formula " + render( phi ) + " expands d_" + std::to_string( r );
                    } );
            t.count( "formulas" );
        }

        // <> is non-expansive in the sup norm, on raw state functions and on formula values
        for ( int k = 0; k < 10; ++k )
        {
            std::vector<Rational> f( sys.state_count() ), g( sys.state_count() );
            for ( StateId s = 0; s < f.size(); ++s )
            {
                f[ s ] = R( static_cast<long>( rng.below( 17 ) ), 16 );
                g[ s ] = R( static_cast<long>( rng.below( 17 ) ), 16 );
            }
            std::vector<Rational> df( f.size() ), dg( f.size() );
            for ( StateId s = 0; s < f.size(); ++s )
                df[ s ] = expect_under( sys, s, f ), dg[ s ] = expect_under( sys, s, g );
            t.expect( sup_distance( df, dg ) <= sup_distance( f, g ), [] { return std::string( "<> expands a state function pair" ); } );

            auto psi1 = random_modal_formula( rng, sys.atoms(), { 3, 10, 8, true } );
            auto psi2 = random_modal_formula( rng, sys.atoms(), { 3, 10, 8, true } );
            const auto lhs = sup_distance( eval_modal_all( sys, ModalFormula::diamond( psi1 ) ),
                                           eval_modal_all( sys, ModalFormula::diamond( psi2 ) ) );
            t.expect( lhs <= sup_distance( eval.values( psi1 ), eval.values( psi2 ) ),
                      [] { return std::string( "<> expands a formula pair" ); } );
            t.count( "diamond pairs", 2 );
        }
    }
    t.at_least( "formulas", 500 );
}

void criterion6( Tally& t )
{
    Rng rng( 6006 );
    // (i) standard translation
    for ( std::size_t i = 0; i < 500; ++i )
    {
        auto sys = random_system( random_params( rng, 8 ), rng.engine()() );
        auto phi = random_modal_formula( rng, sys.atoms(), { 4, 14, 8, true } );
        const StateId s = rng.below( sys.state_count() );
        const auto st = standard_translation( phi, "x" );
        t.expect( quantifier_rank( st ) == modal_rank( phi ), [ & ] { return "translation changes the rank of " + render( phi ); } );
        t.expect( eval_fo( sys, st, { { "x", s } } ) == eval_modal( sys, phi, s ),
                  [ & ] { return "translation differs on " + render( phi ); } );
        t.count( "translation instances" );
    }

    // (ii) locality, (iii) unravelling, (iv) morphisms
    for ( std::size_t i = 0; i < 40; ++i )
    {
        auto A = random_system( random_params( rng, 8 ), rng.engine()() );
        for ( int k = 0; k < 5; ++k )
        {
            auto phi = random_modal_formula( rng, A.atoms(), { 4, 14, 8, true } );
            const std::size_t r = modal_rank( phi );
            const StateId a = rng.below( A.state_count() );
            auto local = restrict_system( A, a, r );
            t.expect( eval_modal( local.system, phi, local.root ) == eval_modal( A, phi, a ),
                      [ & ] { return "rank-" + std::to_string( r ) + " formula sees beyond radius " + std::to_string( r ); } );
            t.count( "locality instances" );
        }

        const StateId a = rng.below( A.state_count() );
        const std::size_t n = 1 + rng.below( 3 );
        auto tree = unravel( A, a, n );
        auto cert = synthesize_duplicator_strategy( A, tree.system, a, tree.root, n, R( 0 ) );
        t.expect( verify_certificate( cert, A, tree.system ).ok && exhaustive_spoiler( cert, A, tree.system ),
                  [] { return std::string( "unravelling certificate rejected" ); } );
        t.count( "unravellings" );

        auto p = random_params( rng, 8 );
        p.n_atoms = A.atoms().size();
        auto B = random_system( p, rng.engine()() );
        auto U = disjoint_union( { &A, &B } );
        const std::pair<const TransitionSystem*, StateId> parts[] = { { &A, U.offsets[ 0 ] }, { &B, U.offsets[ 1 ] } };
        for ( const auto& [ part, off ] : parts )
        {
            std::vector<StateId> inj( part->state_count() );
            for ( StateId s = 0; s < inj.size(); ++s )
                inj[ s ] = off + s;
            t.expect( check_morphism( { *part, U.system, inj } ).ok, [] { return std::string( "injection is not a morphism" ); } );
            const StateId s = rng.below( part->state_count() );
            auto c = synthesize_duplicator_strategy( *part, U.system, s, off + s, 3, R( 0 ) );
            t.expect( verify_certificate( c, *part, U.system ).ok && exhaustive_spoiler( c, *part, U.system ),
                      [] { return std::string( "injection certificate rejected" ); } );
            t.count( "injection certificates" );
        }
    }
    t.at_least( "translation instances", 500 );
}

void criterion7( Tally& t )
{
    Rng rng( 7007 );
    for ( std::size_t i = 0; i < 4; ++i )
    {
        auto p = random_params( rng, 8 );
        p.n_states = 5 + rng.below( 4 );
        p.branching = 3;
        auto sys = random_system( p, rng.engine()() );
        const auto chain = behavioural_distance( sys, 4, LiftMethod::kantorovich );
        Synthesizer synth( chain );
        std::size_t sampled = 0;
        for ( std::size_t attempt = 0; attempt < 400 && sampled < 20; ++attempt )
        {
            const StateId a = rng.below( sys.state_count() ), b = rng.below( sys.state_count() );
            if ( sys.is_terminating( a ) || sys.is_terminating( b ) )
                continue;
            const std::size_t n = 1 + rng.below( 4 );
            const auto& prev = chain.at( n - 1 );
            auto lift = kantorovich_lift( prev, sys.successors( a ), sys.successors( b ) );
            std::vector<Rational> f( sys.state_count() );
            for ( StateId s = 0; s < f.size(); ++s )
            {
                Rational v( 1 );
                for ( std::size_t k = 0; k < lift.price.domain.size(); ++k )
                    v = min( v, lift.price.values[ k ] + prev( s, lift.price.domain[ k ] ) );
                f[ s ] = v;
            }
            auto sf = StateFunction::make( chain, f, n - 1 );
            for ( const Rational& delta : { R( 1, 16 ), R( 1, 64 ) } )
            {
                auto phi = synth.approximate( sf, delta );
                const Rational err = sup_distance( eval_modal_all( sys, phi ), f );
                t.expect( err <= delta && modal_rank( phi ) <= n, [ & ] {
                    return "approximation error " + err.str() + " above " + delta.str();
                } );
                t.count( "approximations" );
            }
            ++sampled;
        }
        t.expect( sampled == 20, [] { return std::string( "fewer than 20 price functions sampled" ); } );
        t.count( "systems" );
    }
}

} // namespace

int main( int argc, char** argv )
{
    const std::string fixtures = argc > 1 ? argv[ 1 ] : "fixtures";
    struct Criterion
    {
        int id;
        const char* name;
        double budget_s;
        std::function<void( Tally& )> run;
    };
    const std::vector<Criterion> criteria{
        { 1, "x/y example exact replay", 1, [ & ]( Tally& t ) { criterion1( t, fixtures ); } },
        { 2, "W, K, game and logical distances coincide", 300, criterion2 },
        { 3, "duality gap is zero", 60, criterion3 },
        { 4, "game bracket at d_n", 300, criterion4 },
        { 5, "non-expansiveness of formulas and <>", 300, criterion5 },
        { 6, "translation, locality, unravelling, morphisms", 120, criterion6 },
        { 7, "approximation of price functions", 300, criterion7 },
    };

    int failed = 0;
    for ( const auto& c : criteria )
    {
        Tally t;
        const auto start = std::chrono::steady_clock::now();
        try
        {
            c.run( t );
        }
        catch ( const std::exception& e )
        {
            t.expect( false, [ & ] { return std::string( "exception: " ) + e.what(); } );
        }
        const double secs = std::chrono::duration<double>( std::chrono::steady_clock::now() - start ).count();
        t.expect( secs < c.budget_s, [ & ] { return "over the " + std::to_string( c.budget_s ) + " s budget"; } );
        const bool ok = t.failures == 0;
        failed += !ok;
        std::cout << "ACCEPTANCE " << c.id << ": " << ( ok ? "PASS" : "FAIL" ) << " " << c.name << " [" << t.summary()
                  << "] (" << std::fixed << std::setprecision( 2 ) << secs << " s)";
        if ( !ok )
            std::cout << " first failure: " << t.first;
        std::cout << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
