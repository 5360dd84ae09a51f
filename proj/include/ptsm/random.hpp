#pragma once

#include "system.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ptsm
{

/// Seeded generator with platform-independent draws. std::mt19937_64 is
/// fully specified by the standard; the distribution adaptors are not, so
/// the bounded draws are done here.
class Rng
{
    std::mt19937_64 _engine;

public:
    explicit Rng( std::uint64_t seed ) : _engine( seed ) {}

    // Uniform in [0, bound), rejection-sampled.
    std::uint64_t below( std::uint64_t bound )
    {
        if ( bound <= 1 )
            return 0;
        const std::uint64_t limit = std::mt19937_64::max() - std::mt19937_64::max() % bound;
        std::uint64_t x;
        do
            x = _engine();
        while ( x >= limit );
        return x % bound;
    }

    // Uniform in [lo, hi].
    std::uint64_t between( std::uint64_t lo, std::uint64_t hi ) { return lo + below( hi - lo + 1 ); }

    // True with exactly the given rational probability.
    bool bernoulli( const Rational& p )
    {
        if ( p.sign() <= 0 )
            return false;
        if ( p >= Rational( 1 ) )
            return true;
        const std::uint64_t den = p.denominator().get_ui();
        const std::uint64_t num = p.numerator().get_ui();
        return below( den ) < num;
    }

    std::mt19937_64& engine() noexcept { return _engine; }
};

struct RandomSystemParams
{
    std::size_t n_states = 5;
    std::size_t n_atoms = 1;
    std::size_t branching = 2;       // maximal support size of a transient state
    std::size_t denominator_bound = 8;
    Rational termination_prob{ 1, 4 };
};

/// Random system with weights and valuations on the 1/denominator_bound grid.
/// Deterministic in the seed.
inline TransitionSystem random_system( const RandomSystemParams& params, std::uint64_t seed )
{
    if ( params.n_states == 0 )
        fail( ErrorCode::parameter, "n_states must be at least 1" );
    if ( params.denominator_bound == 0 )
        fail( ErrorCode::parameter, "denominator_bound must be at least 1" );
    if ( !in_unit_interval( params.termination_prob ) )
        fail( ErrorCode::parameter, "termination_prob outside [0,1]" );
    if ( params.branching == 0 && params.termination_prob < Rational( 1 ) )
        fail( ErrorCode::parameter, "branching 0 requires termination_prob 1" );

    Rng rng( seed );
    const auto den = static_cast<long>( params.denominator_bound );
    RawSystem raw;
    for ( std::size_t p = 0; p < params.n_atoms; ++p )
        raw.atoms.push_back( std::string( 1, static_cast<char>( 'p' + p % 10 ) )
                             + ( p >= 10 ? std::to_string( p / 10 ) : "" ) );

    for ( std::size_t s = 0; s < params.n_states; ++s )
    {
        std::vector<Rational> val;
        for ( std::size_t p = 0; p < params.n_atoms; ++p )
            val.emplace_back( static_cast<long>( rng.between( 0, den ) ), den );
        raw.add_state( "s" + std::to_string( s ), std::move( val ) );
    }

    for ( std::size_t s = 0; s < params.n_states; ++s )
    {
        if ( rng.bernoulli( params.termination_prob ) )
            continue;
        std::size_t support = rng.between( 1, std::min( { params.branching, params.n_states, params.denominator_bound } ) );
        // Distinct targets by partial Fisher-Yates.
        std::vector<StateId> pool( params.n_states );
        for ( std::size_t i = 0; i < pool.size(); ++i )
            pool[ i ] = i;
        for ( std::size_t i = 0; i < support; ++i )
            std::swap( pool[ i ], pool[ i + rng.below( pool.size() - i ) ] );
        // Random composition of `den` into `support` positive parts.
        std::vector<long> cuts{ 0, den };
        while ( cuts.size() < support + 1 )
        {
            long c = static_cast<long>( rng.between( 1, den - 1 ) );
            if ( std::find( cuts.begin(), cuts.end(), c ) == cuts.end() )
                cuts.push_back( c );
        }
        std::sort( cuts.begin(), cuts.end() );
        for ( std::size_t i = 0; i < support; ++i )
            raw.add_edge( s, pool[ i ], Rational( cuts[ i + 1 ] - cuts[ i ], den ) );
    }
    return validate_system( raw );
}

} // namespace ptsm
