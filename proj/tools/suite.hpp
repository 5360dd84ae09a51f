#pragma once

#include <ptsm/ptsm.hpp>

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>

namespace ptsm::suite
{

enum class Fault
{
    none,
    skip_atoms // W chain built without the atom term
};

struct SuiteParams
{
    std::uint64_t seed = 0;
    std::vector<std::size_t> sizes{ 12 };
    std::size_t depth = 4;
    std::size_t trials = 50;
    std::size_t threads = 0; // 0: hardware concurrency
    Fault fault = Fault::none;
};

struct PropertyOutcome
{
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::optional<Json> counterexample; // first failure only
};

using TrialResult = std::map<std::string, PropertyOutcome>;

struct PropertySummary
{
    std::string name;
    std::size_t checks = 0;
    std::size_t failed_trials = 0;
    std::optional<std::size_t> first_trial;
    Json counterexample;
};

inline const std::vector<std::string>& property_names()
{
    static const std::vector<std::string> names{ "pseudometric", "monotone",      "coincidence", "duality",
                                                 "game",         "nonexpansive",  "translation", "logical_lb",
                                                 "witness",      "unravel",       "locality" };
    return names;
}

inline std::uint64_t trial_seed( std::uint64_t seed, std::size_t trial )
{
    return seed * 1000003u + trial;
}

namespace detail
{

class Recorder
{
    TrialResult& _out;

public:
    explicit Recorder( TrialResult& out ) : _out( out ) {}

    void check( const std::string& name, bool ok, const std::function<Json()>& explain )
    {
        auto& p = _out[ name ];
        ++p.checks;
        if ( ok )
            return;
        ++p.failures;
        if ( !p.counterexample )
            p.counterexample = explain();
    }
};

inline Json pair_json( const TransitionSystem& u, StateId a, StateId b )
{
    return Json{ { "a", u.label( a ) }, { "b", u.label( b ) } };
}

} // namespace detail

/// One randomized trial: a pair of systems and every property on them.
inline TrialResult run_trial( const SuiteParams& params, std::size_t trial )
{
    TrialResult result;
    for ( const auto& name : property_names() )
        result[ name ];
    detail::Recorder rec( result );

    Rng rng( trial_seed( params.seed, trial ) );
    const std::size_t size = params.sizes[ trial % params.sizes.size() ];
    const std::size_t atoms = 1 + rng.below( 2 );
    const RandomSystemParams gen{ size, atoms, 3, 16, Rational( 1, 5 ) };
    const auto A = random_system( gen, rng.engine()() );
    const auto B = random_system( gen, rng.engine()() );
    const auto U = disjoint_union( { &A, &B } );
    const auto& u = U.system;
    const std::size_t D = params.depth;

    auto base = [ & ] {
        Json j;
        j[ "trial" ] = trial;
        j[ "seed" ] = trial_seed( params.seed, trial );
        j[ "system_a" ] = system_to_json( A );
        j[ "system_b" ] = system_to_json( B );
        return j;
    };

    DistanceOptions w_opts;
    w_opts.include_atoms = params.fault != Fault::skip_atoms;
    const auto W = behavioural_distance( u, D, LiftMethod::wasserstein, w_opts );
    const auto K = behavioural_distance( u, D, LiftMethod::kantorovich );
    const std::size_t N = u.state_count();
    const StateId off = U.offsets[ 1 ];

    for ( std::size_t n = 0; n <= D; ++n )
    {
        const std::string violation = W.at( n ).check_axioms();
        rec.check( "pseudometric", violation.empty(), [ & ] {
            auto j = base();
            j[ "depth" ] = n;
            j[ "violation" ] = violation;
            return j;
        } );
    }

    for ( std::size_t n = 0; n < D; ++n )
        for ( StateId a = 0; a < N; ++a )
            for ( StateId b = a + 1; b < N; ++b )
                rec.check( "monotone", W.at( n )( a, b ) <= W.at( n + 1 )( a, b ), [ & ] {
                    auto j = base();
                    j[ "depth" ] = n;
                    j[ "pair" ] = detail::pair_json( u, a, b );
                    return j;
                } );

    for ( std::size_t n = 0; n <= D; ++n )
        for ( StateId a = 0; a < N; ++a )
            for ( StateId b = a + 1; b < N; ++b )
                rec.check( "coincidence", W.at( n )( a, b ) == K.at( n )( a, b ), [ & ] {
                    auto j = base();
                    j[ "depth" ] = n;
                    j[ "pair" ] = detail::pair_json( u, a, b );
                    j[ "W" ] = W.at( n )( a, b ).str();
                    j[ "K" ] = K.at( n )( a, b ).str();
                    return j;
                } );

    for ( int i = 0; i < 5; ++i )
    {
        const StateId a = rng.below( N ), b = rng.below( N );
        const std::size_t n = rng.below( D + 1 );
        const Rational gap = duality_gap( K.at( n ), u.successors( a ), u.successors( b ) );
        rec.check( "duality", gap.is_zero(), [ & ] {
            auto j = base();
            j[ "depth" ] = n;
            j[ "pair" ] = detail::pair_json( u, a, b );
            j[ "gap" ] = gap.str();
            return j;
        } );
    }

    // game bracket at a sampled cross pair
    if ( D > 0 )
    {
        const StateId a = rng.below( A.state_count() ), b = rng.below( B.state_count() );
        const std::size_t n = 1 + rng.below( std::min<std::size_t>( D, 3 ) );
        const Rational d = K.at( n )( a, off + b );
        auto explain = [ & ]( const std::string& what ) {
            return [ &, what ] {
                auto j = base();
                j[ "depth" ] = n;
                j[ "pair" ] = Json{ { "a", A.label( a ) }, { "b", B.label( b ) } };
                j[ "distance" ] = d.str();
                j[ "failure" ] = what;
                return j;
            };
        };
        rec.check( "game", game_distance( A, B, a, b, n ) == d, explain( "game value differs from d_n" ) );
        for ( const Rational& eps : { d, min( Rational( 1 ), d + Rational( 1, 1000 ) ) } )
        {
            bool ok = false;
            try
            {
                auto cert = synthesize_duplicator_strategy( A, B, a, b, n, eps );
                ok = verify_certificate( cert, A, B ).ok && exhaustive_spoiler( cert, A, B );
            }
            catch ( const Error& )
            {
            }
            rec.check( "game", ok, explain( "no verified strategy at eps " + eps.str() ) );
        }
        const Rational below = d - Rational( 1, 1000 );
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
            rec.check( "game", refused, explain( "strategy accepted below d_n" ) );
        }
    }

    // random formulas: non-expansiveness, translation, logical lower bound
    std::vector<ModalFormula> formulas;
    for ( int i = 0; i < 10; ++i )
        formulas.push_back( random_modal_formula( rng, u.atoms(), { D, 12, 8, true } ) );
    ModalEvaluator eval( u );
    for ( const auto& phi : formulas )
    {
        const std::size_t r = modal_rank( phi );
        const auto& v = eval.values( phi );
        for ( StateId a = 0; a < N; ++a )
            for ( StateId b = a + 1; b < N; ++b )
                rec.check( "nonexpansive", abs( v[ a ] - v[ b ] ) <= W.at( r )( a, b ), [ & ] {
                    auto j = base();
                    j[ "formula" ] = render( phi );
                    j[ "pair" ] = detail::pair_json( u, a, b );
                    return j;
                } );
        const auto st = standard_translation( phi, "x" );
        for ( StateId s = 0; s < A.state_count(); ++s )
        {
            const Rational fo = eval_fo( A, st, { { "x", s } } );
            rec.check( "translation", fo == v[ s ], [ & ] {
                auto j = base();
                j[ "formula" ] = render( phi );
                j[ "state" ] = A.label( s );
                j[ "modal" ] = v[ s ].str();
                j[ "fo" ] = fo.str();
                return j;
            } );
        }
    }
    {
        const StateId a = rng.below( A.state_count() ), b = rng.below( B.state_count() );
        std::vector<ModalFormula> bounded;
        for ( const auto& phi : formulas )
            if ( modal_rank( phi ) <= D )
                bounded.push_back( phi );
        const Rational lb = logical_distance_lb( A, B, a, b, bounded, D );
        rec.check( "logical_lb", lb <= K.at( D )( a, off + b ), [ & ] {
            auto j = base();
            j[ "pair" ] = Json{ { "a", A.label( a ) }, { "b", B.label( b ) } };
            j[ "lower_bound" ] = lb.str();
            j[ "distance" ] = K.at( D )( a, off + b ).str();
            return j;
        } );
    }

    // witness on the union chain
    {
        const StateId a = rng.below( A.state_count() ), b = off + rng.below( B.state_count() );
        const std::size_t n = rng.below( D + 1 );
        const Rational delta( 1, 64 );
        Synthesizer synth( K );
        std::string failure;
        Rational gap;
        try
        {
            auto phi = synth.witness( a, b, n, delta );
            gap = abs( eval_modal( u, phi, a ) - eval_modal( u, phi, b ) );
            if ( modal_rank( phi ) > n )
                failure = "rank above n";
            else if ( gap < K.at( n )( a, b ) - delta || gap > K.at( n )( a, b ) )
                failure = "gap outside [d_n - delta, d_n]";
        }
        catch ( const Error& e )
        {
            failure = e.what();
        }
        rec.check( "witness", failure.empty(), [ & ] {
            auto j = base();
            j[ "depth" ] = n;
            j[ "pair" ] = detail::pair_json( u, a, b );
            j[ "failure" ] = failure;
            return j;
        } );
    }

    // unravelling root at distance 0, certified at eps = 0
    {
        const StateId a = rng.below( A.state_count() );
        const std::size_t n = std::min<std::size_t>( D, 3 );
        const auto tree = unravel( A, a, n );
        bool ok = false;
        try
        {
            auto cert = synthesize_duplicator_strategy( A, tree.system, a, tree.root, n, Rational( 0 ) );
            ok = verify_certificate( cert, A, tree.system ).ok;
        }
        catch ( const Error& )
        {
        }
        rec.check( "unravel", ok, [ & ] {
            auto j = base();
            j[ "state" ] = A.label( a );
            j[ "depth" ] = n;
            return j;
        } );
    }

    // rank-k formulas only see the radius-k neighbourhood
    for ( const auto& phi : formulas )
    {
        const std::size_t k = modal_rank( phi );
        const StateId a = rng.below( A.state_count() );
        const auto local = restrict_system( A, a, k );
        const Rational inside = eval_modal( local.system, phi, local.root );
        const Rational outside = eval_modal( A, phi, a );
        rec.check( "locality", inside == outside, [ & ] {
            auto j = base();
            j[ "formula" ] = render( phi );
            j[ "state" ] = A.label( a );
            j[ "restricted" ] = inside.str();
            j[ "full" ] = outside.str();
            return j;
        } );
    }
    return result;
}

/// Runs all trials, in parallel, and folds them in trial order.
inline std::vector<PropertySummary> run_suite( const SuiteParams& params )
{
    if ( params.sizes.empty() || std::find( params.sizes.begin(), params.sizes.end(), 0 ) != params.sizes.end() )
        fail( ErrorCode::parameter, "sizes must be positive" );

    std::vector<TrialResult> trials( params.trials );
    std::vector<std::exception_ptr> errors( params.trials );
    std::atomic<std::size_t> next{ 0 };
    auto worker = [ & ] {
        for ( std::size_t t = next++; t < params.trials; t = next++ )
        {
            try
            {
                trials[ t ] = run_trial( params, t );
            }
            catch ( ... )
            {
                errors[ t ] = std::current_exception();
            }
        }
    };
    std::size_t threads = params.threads ? params.threads : std::max( 1u, std::thread::hardware_concurrency() );
    threads = std::min( threads, std::max<std::size_t>( params.trials, 1 ) );
    std::vector<std::jthread> pool;
    for ( std::size_t i = 0; i < threads; ++i )
        pool.emplace_back( worker );
    pool.clear();
    for ( const auto& e : errors )
        if ( e )
            std::rethrow_exception( e );

    std::vector<PropertySummary> out;
    for ( const auto& name : property_names() )
    {
        PropertySummary s;
        s.name = name;
        for ( std::size_t t = 0; t < trials.size(); ++t )
        {
            const auto& p = trials[ t ].at( name );
            s.checks += p.checks;
            if ( p.failures == 0 )
                continue;
            ++s.failed_trials;
            if ( !s.first_trial )
            {
                s.first_trial = t;
                s.counterexample = *p.counterexample;
            }
        }
        out.push_back( std::move( s ) );
    }
    return out;
}

} // namespace ptsm::suite
