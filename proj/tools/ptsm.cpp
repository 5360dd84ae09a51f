// ptsm: command-line front end for the library.
//
// Exit codes: 0 success, 1 input error, 2 property or assertion failure
// (including NotWinnable), 3 internal error.

#include "suite.hpp"

#include <ptsm/ptsm.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace ptsm;

namespace
{

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_property = 2;
constexpr int exit_internal = 3;

int exit_code_for( ErrorCode code )
{
    switch ( code )
    {
    case ErrorCode::not_winnable: return exit_property;
    case ErrorCode::internal: return exit_internal;
    default: return exit_input;
    }
}

std::string fnv1a64( const std::string& bytes )
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for ( unsigned char c : bytes )
    {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[ 17 ];
    std::snprintf( buf, sizeof buf, "%016llx", static_cast<unsigned long long>( h ) );
    return buf;
}

Json value_json( const Rational& r ) { return Json{ { "exact", r.str() }, { "decimal", r.decimal( 6 ) } }; }

std::string show( const Rational& r ) { return r.str() + " (" + r.decimal( 6 ) + ")"; }

void write_text( const std::string& path, const std::string& text )
{
    if ( path == "-" )
    {
        std::cout << text;
        return;
    }
    std::ofstream out( path, std::ios::binary );
    if ( !out )
        fail( ErrorCode::io, "cannot write '" + path + "'" );
    out << text;
}

Rational parse_rational_arg( const std::string& text, const std::string& what )
{
    auto r = Rational::try_parse( text );
    if ( !r )
        fail( ErrorCode::syntax, what + " '" + text + "' is not a rational n or n/d" );
    return *r;
}

// Shared state of one invocation
struct Run
{
    std::vector<std::string> args;
    std::string json_out;
    bool timing = false;
    std::optional<std::size_t> max_depth_flag;
    Json inputs = Json::object();
    Json outputs = Json::object();
    std::optional<std::uint64_t> seed;

    std::size_t max_depth() const
    {
        if ( max_depth_flag )
            return *max_depth_flag;
        const char* env = std::getenv( "PTSM_MAX_DEPTH" );
        if ( !env || !*env )
            return 8;
        char* end = nullptr;
        const unsigned long long v = std::strtoull( env, &end, 10 );
        if ( *end != '\0' || env[ 0 ] == '-' )
            fail( ErrorCode::parameter, std::string( "PTSM_MAX_DEPTH='" ) + env + "' is not a natural number" );
        return static_cast<std::size_t>( v );
    }

    void check_depth( std::size_t n ) const
    {
        const std::size_t cap = max_depth();
        if ( n > cap )
            fail( ErrorCode::parameter, "depth " + std::to_string( n ) + " exceeds the cap " + std::to_string( cap )
                                            + " (PTSM_MAX_DEPTH or --max-depth)" );
    }

    TransitionSystem load( const std::string& role, const std::string& path )
    {
        const std::string text = read_file( path );
        inputs[ role ] = Json{ { "path", path }, { "fnv1a64", fnv1a64( text ) } };
        return system_from_json( parse_json_text( text, path ) );
    }

    Json report( const std::optional<Json>& error, double elapsed_ms ) const
    {
        Json j;
        j[ "command" ] = args;
        j[ "inputs" ] = inputs;
        j[ "seed" ] = seed ? Json( *seed ) : Json( nullptr );
        j[ "outputs" ] = outputs;
        if ( error )
            j[ "error" ] = *error;
        if ( timing )
            j[ "timing_ms" ] = elapsed_ms;
        return j;
    }
};

// Two systems: B defaults to A
struct Pair
{
    TransitionSystem a;
    std::optional<TransitionSystem> b_own;
    const TransitionSystem& b() const { return b_own ? *b_own : a; }
};

Pair load_pair( Run& run, const std::string& path_a, const std::string& path_b )
{
    Pair p{ run.load( "system", path_a ), std::nullopt };
    if ( !path_b.empty() )
        p.b_own = run.load( "system_b", path_b );
    require_same_atoms( p.a, p.b() );
    return p;
}

Json matrix_json( const PseudometricMatrix& d, const TransitionSystem& sys, std::size_t offset_b,
                  const TransitionSystem& sysB )
{
    // rows index states of A, columns states of B
    Json rows = Json::array(), dec = Json::array();
    for ( StateId a = 0; a < sys.state_count(); ++a )
    {
        Json r = Json::array(), rd = Json::array();
        for ( StateId b = 0; b < sysB.state_count(); ++b )
        {
            r.push_back( d( a, offset_b + b ).str() );
            rd.push_back( d( a, offset_b + b ).decimal( 6 ) );
        }
        rows.push_back( std::move( r ) );
        dec.push_back( std::move( rd ) );
    }
    Json labels_a = Json::array(), labels_b = Json::array();
    for ( StateId a = 0; a < sys.state_count(); ++a )
        labels_a.push_back( sys.label( a ) );
    for ( StateId b = 0; b < sysB.state_count(); ++b )
        labels_b.push_back( sysB.label( b ) );
    return Json{ { "rows", labels_a }, { "columns", labels_b }, { "exact", rows }, { "decimal", dec } };
}

// ---------------------------------------------------------------------------
// Commands

int cmd_validate( Run& run, const std::string& path )
{
    auto sys = run.load( "system", path );
    run.outputs[ "valid" ] = true;
    run.outputs[ "states" ] = sys.state_count();
    run.outputs[ "atoms" ] = sys.atoms();
    std::cout << "OK: " << sys.state_count() << " states, " << sys.atoms().size() << " atoms\n";
    return exit_ok;
}

struct EvalArgs
{
    std::string system, modal, fo, state;
    std::vector<std::string> env;
};

int cmd_eval( Run& run, const EvalArgs& args )
{
    auto sys = run.load( "system", args.system );
    if ( args.modal.empty() == args.fo.empty() )
        fail( ErrorCode::parameter, "give exactly one of --modal and --fo" );

    if ( !args.modal.empty() )
    {
        auto phi = parse_modal( args.modal );
        run.outputs[ "logic" ] = "modal";
        run.outputs[ "formula" ] = render( phi );
        run.outputs[ "rank" ] = modal_rank( phi );
        if ( !args.state.empty() )
        {
            const Rational v = eval_modal( sys, phi, sys.state( args.state ) );
            run.outputs[ "state" ] = args.state;
            run.outputs[ "value" ] = value_json( v );
            std::cout << show( v ) << "\n";
            return exit_ok;
        }
        auto all = eval_modal_all( sys, phi );
        Json values = Json::object();
        for ( StateId s = 0; s < all.size(); ++s )
        {
            values[ sys.label( s ) ] = value_json( all[ s ] );
            std::cout << sys.label( s ) << ": " << show( all[ s ] ) << "\n";
        }
        run.outputs[ "values" ] = values;
        return exit_ok;
    }

    auto parsed = parse_fo( args.fo );
    Environment env;
    for ( const auto& binding : args.env )
    {
        const auto eq = binding.find( '=' );
        if ( eq == std::string::npos || eq == 0 )
            fail( ErrorCode::syntax, "environment entry '" + binding + "' is not var=state" );
        env[ binding.substr( 0, eq ) ] = sys.state( binding.substr( eq + 1 ) );
    }
    if ( !args.state.empty() )
    {
        if ( parsed.free_vars.size() != 1 )
            fail( ErrorCode::parameter, "--state needs exactly one free variable, the formula has "
                                            + std::to_string( parsed.free_vars.size() ) );
        env[ parsed.free_vars.front() ] = sys.state( args.state );
    }
    const Rational v = eval_fo( sys, parsed.formula, env );
    Json envj = Json::object();
    for ( const auto& [ var, s ] : env )
        envj[ var ] = sys.label( s );
    run.outputs[ "logic" ] = "fo";
    run.outputs[ "formula" ] = render( parsed.formula );
    run.outputs[ "quantifier_rank" ] = quantifier_rank( parsed.formula );
    run.outputs[ "environment" ] = envj;
    run.outputs[ "value" ] = value_json( v );
    std::cout << show( v ) << "\n";
    return exit_ok;
}

struct DistanceArgs
{
    std::string system, system_b, method = "w";
    std::size_t depth = 1;
    std::vector<std::string> pairs;
    bool assert_coincide = false;
};

std::vector<std::pair<StateId, StateId>> resolve_pairs( const std::vector<std::string>& specs,
                                                        const TransitionSystem& A, const TransitionSystem& B,
                                                        bool same )
{
    std::vector<std::pair<StateId, StateId>> out;
    for ( const auto& spec : specs )
    {
        const auto comma = spec.find( ',' );
        if ( comma == std::string::npos )
            fail( ErrorCode::syntax, "pair '" + spec + "' is not a,b" );
        out.emplace_back( A.state( spec.substr( 0, comma ) ), B.state( spec.substr( comma + 1 ) ) );
    }
    if ( specs.empty() )
        for ( StateId a = 0; a < A.state_count(); ++a )
            for ( StateId b = same ? a + 1 : 0; b < B.state_count(); ++b )
                out.emplace_back( a, b );
    return out;
}

// Game value of a pair, certified: a strategy at the value passes both
// checkers and synthesis is refused just below it.
std::optional<std::string> certify_game_value( const TransitionSystem& A, const TransitionSystem& B, StateId a,
                                               StateId b, std::size_t n, const Rational& value )
{
    auto cert = synthesize_duplicator_strategy( A, B, a, b, n, value );
    auto check = verify_certificate( cert, A, B );
    if ( !check.ok )
        return "certificate rejected: " + check.violation;
    if ( !exhaustive_spoiler( cert, A, B ) )
        return "spoiler wins against the certificate";
    const Rational below = value - Rational( 1, 1000 );
    if ( value.sign() > 0 && below.sign() >= 0 )
    {
        try
        {
            synthesize_duplicator_strategy( A, B, a, b, n, below );
            return "strategy found below the value";
        }
        catch ( const Error& e )
        {
            if ( e.code() != ErrorCode::not_winnable )
                throw;
        }
    }
    return std::nullopt;
}

int cmd_distance( Run& run, const DistanceArgs& args )
{
    run.check_depth( args.depth );
    auto sys = load_pair( run, args.system, args.system_b );
    const bool same = !sys.b_own;
    const auto& A = sys.a;
    const auto& B = sys.b();
    const auto pairs = resolve_pairs( args.pairs, A, B, same );

    std::vector<std::string> methods;
    if ( args.assert_coincide )
        methods = { "w", "k", "g" };
    else
        methods = { args.method };

    std::map<std::string, DistanceChain> chains;
    for ( const auto& m : methods )
    {
        const LiftMethod lift = m == "k" ? LiftMethod::kantorovich : LiftMethod::wasserstein;
        if ( !chains.contains( m ) )
            chains.emplace( m, same ? behavioural_distance( A, args.depth, lift )
                                    : behavioural_distance( A, B, args.depth, lift ) );
    }

    Json chains_json = Json::object();
    for ( const auto& m : methods )
    {
        const auto& chain = chains.at( m );
        Json levels = Json::array();
        for ( std::size_t n = 0; n <= args.depth; ++n )
            levels.push_back( matrix_json( chain.at( n ), A, chain.offset_b, B ) );
        std::string key = m == "w" ? "W" : m == "k" ? "K" : "G";
        chains_json[ key ] = std::move( levels );
    }
    run.outputs[ "depth" ] = args.depth;
    run.outputs[ "method" ] = args.assert_coincide ? "all" : chains_json.begin().key();
    {
        // depth-n values keyed "a|b", from the first method run
        const auto& chain = chains.at( methods.front() );
        Json flat = Json::object();
        for ( StateId a = 0; a < A.state_count(); ++a )
            for ( StateId b = 0; b < B.state_count(); ++b )
                flat[ A.label( a ) + "|" + B.label( b ) ] = chain.cross( args.depth, a, b ).str();
        run.outputs[ "matrix" ] = flat;
    }
    run.outputs[ "chains" ] = chains_json;

    bool mismatch = false;
    Json pairs_json = Json::array();
    for ( auto [ a, b ] : pairs )
    {
        Json pj{ { "a", A.label( a ) }, { "b", B.label( b ) } };
        Json values = Json::object();
        std::optional<Rational> first;
        std::cout << "d_" << args.depth << "(" << A.label( a ) << ", " << B.label( b ) << ")";
        for ( const auto& m : methods )
        {
            const Rational v = chains.at( m ).cross( args.depth, a, b );
            std::string key = m == "w" ? "W" : m == "k" ? "K" : "G";
            if ( m == "g" )
            {
                if ( auto problem = certify_game_value( A, B, a, b, args.depth, v ) )
                {
                    mismatch = true;
                    pj[ "game_problem" ] = *problem;
                    std::cerr << "game value of (" << A.label( a ) << ", " << B.label( b ) << "): " << *problem
                              << "\n";
                }
            }
            values[ key ] = value_json( v );
            if ( first && *first != v )
                mismatch = true;
            first = first.value_or( v );
            std::cout << " " << key << "=" << v.str();
        }
        std::cout << "  (" << first->decimal( 6 ) << ")\n";
        pj[ "values" ] = values;
        pairs_json.push_back( std::move( pj ) );
    }
    run.outputs[ "pairs" ] = pairs_json;

    if ( args.assert_coincide )
    {
        for ( std::size_t n = 0; n <= args.depth && !mismatch; ++n )
            for ( StateId a = 0; a < chains.at( "w" ).system.state_count(); ++a )
                for ( StateId b = 0; b < chains.at( "w" ).system.state_count(); ++b )
                    if ( chains.at( "w" ).at( n )( a, b ) != chains.at( "k" ).at( n )( a, b ) )
                        mismatch = true;
        run.outputs[ "coincide" ] = !mismatch;
        std::cout << ( mismatch ? "MISMATCH between methods\n" : "methods coincide\n" );
        return mismatch ? exit_property : exit_ok;
    }
    return exit_ok;
}

struct WitnessArgs
{
    std::string system, system_b, a, b, delta = "1/64";
    std::size_t depth = 1;
};

int cmd_witness( Run& run, const WitnessArgs& args )
{
    run.check_depth( args.depth );
    auto sys = load_pair( run, args.system, args.system_b );
    const Rational delta = parse_rational_arg( args.delta, "--delta" );
    auto w = witness_formula( sys.a, sys.b(), sys.a.state( args.a ), sys.b().state( args.b ), args.depth, delta );
    run.outputs[ "formula" ] = render( w.formula );
    run.outputs[ "formula_json" ] = modal_to_json( w.formula );
    run.outputs[ "rank" ] = modal_rank( w.formula );
    run.outputs[ "value_a" ] = value_json( w.value_a );
    run.outputs[ "value_b" ] = value_json( w.value_b );
    run.outputs[ "gap" ] = value_json( w.gap );
    run.outputs[ "distance" ] = value_json( w.distance );
    run.outputs[ "delta" ] = delta.str();
    std::cout << "formula: " << render( w.formula ) << "\n"
              << "rank: " << modal_rank( w.formula ) << "\n"
              << "value at " << args.a << ": " << show( w.value_a ) << "\n"
              << "value at " << args.b << ": " << show( w.value_b ) << "\n"
              << "gap: " << show( w.gap ) << "\n"
              << "d_" << args.depth << ": " << show( w.distance ) << "\n";
    return exit_ok;
}

struct GameArgs
{
    std::string system, system_b, a, b, eps, certificate, out;
    std::size_t depth = 1;
};

int cmd_game_value( Run& run, const GameArgs& args )
{
    run.check_depth( args.depth );
    auto sys = load_pair( run, args.system, args.system_b );
    const Rational v = game_distance( sys.a, sys.b(), sys.a.state( args.a ), sys.b().state( args.b ), args.depth );
    run.outputs[ "value" ] = value_json( v );
    std::cout << show( v ) << "\n";
    return exit_ok;
}

int cmd_game_synth( Run& run, const GameArgs& args )
{
    run.check_depth( args.depth );
    auto sys = load_pair( run, args.system, args.system_b );
    const Rational eps = parse_rational_arg( args.eps, "--eps" );
    auto cert = synthesize_duplicator_strategy( sys.a, sys.b(), sys.a.state( args.a ), sys.b().state( args.b ),
                                                args.depth, eps );
    Json cj = certificate_to_json( cert, sys.a, sys.b() );
    run.outputs[ "nodes" ] = cert.node_count();
    run.outputs[ "certificate" ] = cj;
    if ( args.out.empty() )
        std::cout << cj.dump( 2 ) << "\n";
    else
    {
        write_text( args.out, cj.dump( 2 ) + "\n" );
        std::cout << "certificate with " << cert.node_count() << " nodes written to " << args.out << "\n";
    }
    return exit_ok;
}

int cmd_game_verify( Run& run, const GameArgs& args )
{
    auto sys = load_pair( run, args.system, args.system_b );
    const std::string text = read_file( args.certificate );
    run.inputs[ "certificate" ] = Json{ { "path", args.certificate }, { "fnv1a64", fnv1a64( text ) } };
    auto cert = certificate_from_json( parse_json_text( text, args.certificate ), sys.a, sys.b(), "certificate" );
    auto check = verify_certificate( cert, sys.a, sys.b() );
    const bool spoiler_ok = exhaustive_spoiler( cert, sys.a, sys.b() );
    run.outputs[ "valid" ] = check.ok;
    run.outputs[ "spoiler_check" ] = spoiler_ok;
    if ( !check.ok )
    {
        run.outputs[ "violation" ] = check.violation;
        run.outputs[ "path" ] = check.path;
        std::cout << "INVALID: " << check.violation << "\n";
    }
    else if ( !spoiler_ok )
        std::cout << "INVALID: the spoiler wins against this certificate\n";
    else
        std::cout << "OK: certificate with " << cert.node_count() << " nodes\n";
    return check.ok && spoiler_ok ? exit_ok : exit_property;
}

struct TransformArgs
{
    std::string system, system_b, state, modal, var = "x", out;
    std::size_t radius = 1, depth = 1;
};

int emit_system( Run& run, const TransitionSystem& sys, const std::string& out )
{
    Json sj = system_to_json( sys );
    run.outputs[ "system" ] = sj;
    if ( out.empty() )
        std::cout << sj.dump( 2 ) << "\n";
    else
    {
        write_text( out, sj.dump( 2 ) + "\n" );
        std::cout << sys.state_count() << " states written to " << out << "\n";
    }
    return exit_ok;
}

Json origin_json( const Embedding& e, const TransitionSystem& source )
{
    Json j = Json::object();
    for ( StateId s = 0; s < e.origin.size(); ++s )
        j[ e.system.label( s ) ] = source.label( e.origin[ s ] );
    return j;
}

int cmd_restrict( Run& run, const TransformArgs& args )
{
    auto sys = run.load( "system", args.system );
    auto e = restrict_system( sys, sys.state( args.state ), args.radius );
    run.outputs[ "root" ] = e.system.label( e.root );
    run.outputs[ "origin" ] = origin_json( e, sys );
    return emit_system( run, e.system, args.out );
}

int cmd_unravel( Run& run, const TransformArgs& args )
{
    run.check_depth( args.depth );
    auto sys = run.load( "system", args.system );
    auto e = unravel( sys, sys.state( args.state ), args.depth );
    run.outputs[ "root" ] = e.system.label( e.root );
    run.outputs[ "origin" ] = origin_json( e, sys );
    return emit_system( run, e.system, args.out );
}

int cmd_union( Run& run, const TransformArgs& args )
{
    auto a = run.load( "system", args.system );
    auto b = run.load( "system_b", args.system_b );
    auto u = disjoint_union( { &a, &b } );
    run.outputs[ "offsets" ] = u.offsets;
    std::cerr << "offsets: " << u.offsets[ 0 ] << " " << u.offsets[ 1 ] << "\n";
    return emit_system( run, u.system, args.out );
}

int cmd_translate( Run& run, const TransformArgs& args )
{
    auto phi = parse_modal( args.modal );
    auto st = standard_translation( phi, args.var );
    run.outputs[ "formula" ] = render( st );
    run.outputs[ "formula_json" ] = fo_to_json( st );
    run.outputs[ "quantifier_rank" ] = quantifier_rank( st );
    if ( !args.out.empty() )
        write_text( args.out, fo_to_json( st ).dump( 2 ) + "\n" );
    std::cout << render( st ) << "\n";
    return exit_ok;
}

struct SuiteArgs
{
    std::uint64_t seed = 0;
    std::vector<std::size_t> sizes{ 12 };
    std::size_t depth = 4, trials = 50, threads = 0;
    std::string fault = "none";
};

int cmd_suite( Run& run, const SuiteArgs& args )
{
    run.check_depth( args.depth );
    run.seed = args.seed;
    suite::SuiteParams params;
    params.seed = args.seed;
    params.sizes = args.sizes;
    params.depth = args.depth;
    params.trials = args.trials;
    params.threads = args.threads;
    if ( args.fault == "skip-atoms" )
        params.fault = suite::Fault::skip_atoms;
    else if ( args.fault != "none" )
        fail( ErrorCode::parameter, "unknown fault '" + args.fault + "'" );

    if ( args.trials == 0 )
        std::cerr << "warning: 0 trials, every property passes vacuously\n";

    auto summary = suite::run_suite( params );
    bool all_ok = true;
    Json props = Json::array();
    for ( const auto& s : summary )
    {
        const bool ok = s.failed_trials == 0;
        all_ok = all_ok && ok;
        Json pj{ { "name", s.name }, { "pass", ok }, { "checks", s.checks }, { "failed_trials", s.failed_trials } };
        if ( !ok )
        {
            pj[ "first_failing_trial" ] = *s.first_trial;
            pj[ "counterexample" ] = s.counterexample;
        }
        props.push_back( std::move( pj ) );
        std::cout << ( ok ? "PASS " : "FAIL " ) << s.name << " (" << s.checks << " checks";
        if ( !ok )
            std::cout << ", " << s.failed_trials << " failing trials, first " << *s.first_trial;
        std::cout << ")\n";
        if ( !ok )
            std::cout << "  counterexample: " << s.counterexample.dump() << "\n";
    }
    run.outputs[ "trials" ] = args.trials;
    run.outputs[ "sizes" ] = args.sizes;
    run.outputs[ "depth" ] = args.depth;
    run.outputs[ "fault" ] = args.fault;
    run.outputs[ "properties" ] = props;
    run.outputs[ "pass" ] = all_ok;
    return all_ok ? exit_ok : exit_property;
}

struct GenerateArgs
{
    std::uint64_t seed = 0;
    std::size_t states = 6, atoms = 1, branching = 2, denominator = 8;
    std::string termination = "1/4", out;
};

int cmd_generate( Run& run, const GenerateArgs& args )
{
    run.seed = args.seed;
    RandomSystemParams p{ args.states, args.atoms, args.branching, args.denominator,
                          parse_rational_arg( args.termination, "--termination" ) };
    return emit_system( run, random_system( p, args.seed ), args.out );
}

} // namespace

int main( int argc, char** argv )
{
    Run run;
    for ( int i = 1; i < argc; ++i )
        run.args.emplace_back( argv[ i ] );

    CLI::App app{ "Behavioural distances, modal formulas and bisimulation games on probabilistic transition systems" };
    app.require_subcommand( 1 );
    app.fallthrough();
    app.add_option( "--json", run.json_out, "Write the JSON run report to this path (- for stdout)" );
    app.add_flag( "--timing", run.timing, "Add wall-clock timing to the report" );
    app.add_option( "--max-depth", run.max_depth_flag, "Depth cap, overrides PTSM_MAX_DEPTH (default 8)" );

    std::function<int()> action;

    std::string validate_path;
    auto* validate = app.add_subcommand( "validate", "Check a system file" );
    validate->add_option( "-s,--system,path", validate_path, "System JSON" )->required();
    validate->callback( [ & ] { action = [ & ] { return cmd_validate( run, validate_path ); }; } );

    EvalArgs ev;
    auto* eval = app.add_subcommand( "eval", "Evaluate a modal or first-order formula" );
    eval->add_option( "-s,--system", ev.system, "System JSON" )->required();
    eval->add_option( "--modal", ev.modal, "Modal formula" );
    eval->add_option( "--fo", ev.fo, "First-order formula" );
    eval->add_option( "--state", ev.state, "State label (all states if omitted for modal formulas)" );
    eval->add_option( "--env", ev.env, "Variable binding var=state, repeatable" );
    eval->callback( [ & ] { action = [ & ] { return cmd_eval( run, ev ); }; } );

    DistanceArgs da;
    auto* dist = app.add_subcommand( "distance", "Depth-n behavioural distance chain" );
    dist->add_option( "-s,--system", da.system, "System JSON" )->required();
    dist->add_option( "--system-b", da.system_b, "Second system (default: the first)" );
    dist->add_option( "-n,--depth", da.depth, "Depth" );
    dist->add_option( "--method", da.method, "w (transport), k (price LP) or g (game)" )
        ->check( CLI::IsMember( { "w", "k", "g" } ) );
    dist->add_option( "--pair", da.pairs, "Pair a,b to report, repeatable (default: all)" );
    dist->add_flag( "--assert-coincide", da.assert_coincide, "Run all methods and fail on any mismatch" );
    dist->callback( [ & ] { action = [ & ] { return cmd_distance( run, da ); }; } );

    WitnessArgs wa;
    auto* wit = app.add_subcommand( "witness", "Synthesize a modal formula separating two states" );
    wit->add_option( "-s,--system", wa.system, "System JSON" )->required();
    wit->add_option( "--system-b", wa.system_b, "Second system (default: the first)" );
    wit->add_option( "-a,--state-a", wa.a, "State of the first system" )->required();
    wit->add_option( "-b,--state-b", wa.b, "State of the second system" )->required();
    wit->add_option( "-n,--depth", wa.depth, "Rank budget" );
    wit->add_option( "--delta", wa.delta, "Slack" );
    wit->callback( [ & ] { action = [ & ] { return cmd_witness( run, wa ); }; } );

    GameArgs ga;
    auto* game = app.add_subcommand( "game", "Bisimulation game" );
    game->require_subcommand( 1 );
    auto add_game_common = [ & ]( CLI::App* sub ) {
        sub->add_option( "-s,--system", ga.system, "System JSON" )->required();
        sub->add_option( "--system-b", ga.system_b, "Second system (default: the first)" );
    };
    auto* gsynth = game->add_subcommand( "synth", "Synthesize a duplicator strategy certificate" );
    add_game_common( gsynth );
    gsynth->add_option( "-a,--state-a", ga.a, "State of the first system" )->required();
    gsynth->add_option( "-b,--state-b", ga.b, "State of the second system" )->required();
    gsynth->add_option( "-n,--depth", ga.depth, "Rounds" );
    gsynth->add_option( "--eps", ga.eps, "Allowed deviation" )->required();
    gsynth->add_option( "-o,--out", ga.out, "Certificate output path (default: stdout)" );
    gsynth->callback( [ & ] { action = [ & ] { return cmd_game_synth( run, ga ); }; } );
    auto* gverify = game->add_subcommand( "verify", "Check a certificate" );
    add_game_common( gverify );
    gverify->add_option( "-c,--certificate", ga.certificate, "Certificate JSON" )->required();
    gverify->callback( [ & ] { action = [ & ] { return cmd_game_verify( run, ga ); }; } );
    auto* gvalue = game->add_subcommand( "value", "Depth-n game value" );
    add_game_common( gvalue );
    gvalue->add_option( "-a,--state-a", ga.a, "State of the first system" )->required();
    gvalue->add_option( "-b,--state-b", ga.b, "State of the second system" )->required();
    gvalue->add_option( "-n,--depth", ga.depth, "Rounds" );
    gvalue->callback( [ & ] { action = [ & ] { return cmd_game_value( run, ga ); }; } );

    TransformArgs ta;
    auto* transform = app.add_subcommand( "transform", "Restrict, unravel, join systems or translate formulas" );
    transform->require_subcommand( 1 );
    auto* trestrict = transform->add_subcommand( "restrict", "Radius-k neighbourhood of a state" );
    trestrict->add_option( "-s,--system", ta.system, "System JSON" )->required();
    trestrict->add_option( "--state", ta.state, "Centre" )->required();
    trestrict->add_option( "-k,--radius", ta.radius, "Radius" );
    trestrict->add_option( "-o,--out", ta.out, "Output path (default: stdout)" );
    trestrict->callback( [ & ] { action = [ & ] { return cmd_restrict( run, ta ); }; } );
    auto* tunravel = transform->add_subcommand( "unravel", "Depth-bounded unravelling" );
    tunravel->add_option( "-s,--system", ta.system, "System JSON" )->required();
    tunravel->add_option( "--state", ta.state, "Root" )->required();
    tunravel->add_option( "-n,--depth", ta.depth, "Depth" );
    tunravel->add_option( "-o,--out", ta.out, "Output path (default: stdout)" );
    tunravel->callback( [ & ] { action = [ & ] { return cmd_unravel( run, ta ); }; } );
    auto* tunion = transform->add_subcommand( "union", "Disjoint union of two systems" );
    tunion->add_option( "-s,--system", ta.system, "First system" )->required();
    tunion->add_option( "--system-b", ta.system_b, "Second system" )->required();
    tunion->add_option( "-o,--out", ta.out, "Output path (default: stdout)" );
    tunion->callback( [ & ] { action = [ & ] { return cmd_union( run, ta ); }; } );
    auto* ttranslate = transform->add_subcommand( "translate", "Standard translation into first-order logic" );
    ttranslate->add_option( "--modal", ta.modal, "Modal formula" )->required();
    ttranslate->add_option( "--var", ta.var, "Free variable (default x)" );
    ttranslate->add_option( "-o,--out", ta.out, "Write the formula as JSON" );
    ttranslate->callback( [ & ] { action = [ & ] { return cmd_translate( run, ta ); }; } );

    SuiteArgs sa;
    auto* suite_cmd = app.add_subcommand( "suite", "Randomized property suite" );
    suite_cmd->add_option( "--seed", sa.seed, "Seed" );
    suite_cmd->add_option( "--sizes", sa.sizes, "State counts, cycled over trials" )->delimiter( ',' );
    suite_cmd->add_option( "-n,--depth", sa.depth, "Depth" );
    suite_cmd->add_option( "--trials", sa.trials, "Number of trials" );
    suite_cmd->add_option( "--threads", sa.threads, "Worker threads (0: all cores)" );
    suite_cmd->add_option( "--fault", sa.fault, "Inject a fault: none or skip-atoms" );
    suite_cmd->callback( [ & ] { action = [ & ] { return cmd_suite( run, sa ); }; } );

    GenerateArgs gen;
    auto* generate = app.add_subcommand( "generate", "Random system" );
    generate->add_option( "--seed", gen.seed, "Seed" );
    generate->add_option( "--states", gen.states, "Number of states" );
    generate->add_option( "--atoms", gen.atoms, "Number of atoms" );
    generate->add_option( "--branching", gen.branching, "Maximal support size" );
    generate->add_option( "--denominator", gen.denominator, "Weight and value grid" );
    generate->add_option( "--termination", gen.termination, "Probability that a state terminates" );
    generate->add_option( "-o,--out", gen.out, "Output path (default: stdout)" );
    generate->callback( [ & ] { action = [ & ] { return cmd_generate( run, gen ); }; } );

    try
    {
        app.parse( argc, argv );
    }
    catch ( const CLI::ParseError& e )
    {
        const int code = app.exit( e );
        return code == 0 ? exit_ok : exit_input;
    }

    const auto start = std::chrono::steady_clock::now();
    int code = exit_internal;
    std::optional<Json> error;
    try
    {
        code = action();
    }
    catch ( const Error& e )
    {
        code = exit_code_for( e.code() );
        std::cerr << "error: " << e.what() << "\n";
        error = Json{ { "code", error_code_name( e.code() ) }, { "message", e.what() } };
        if ( e.position() )
            ( *error )[ "position" ] = *e.position();
    }
    catch ( const std::exception& e )
    {
        code = exit_internal;
        std::cerr << "internal error: " << e.what() << "\n";
        error = Json{ { "code", "InternalError" }, { "message", e.what() } };
    }
    const double ms = std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - start ).count();

    if ( !run.json_out.empty() )
    {
        try
        {
            write_text( run.json_out, run.report( error, ms ).dump( 2 ) + "\n" );
        }
        catch ( const Error& e )
        {
            std::cerr << "error: " << e.what() << "\n";
            return exit_input;
        }
    }
    return code;
}
