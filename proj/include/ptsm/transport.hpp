#pragma once

#include "rational.hpp"

#include <optional>
#include <vector>

namespace ptsm
{

struct TransportResult
{
    Rational cost;
    std::vector<std::vector<Rational>> flow; // supply x demand
    std::size_t pivots = 0;
};

/// Balanced transportation problem solved exactly by the transportation
/// simplex: northwest-corner start (degenerate zero cells kept basic), MODI
/// potentials for pricing, smallest-index entering and leaving cells.
inline TransportResult solve_transport( const std::vector<Rational>& supply, const std::vector<Rational>& demand,
                                        const std::vector<std::vector<Rational>>& cost )
{
    const std::size_t m = supply.size();
    const std::size_t n = demand.size();
    if ( m == 0 || n == 0 )
        fail( ErrorCode::infeasible_marginals, "empty marginal" );
    Rational ts, td;
    for ( const auto& s : supply )
    {
        if ( s.sign() < 0 )
            fail( ErrorCode::infeasible_marginals, "negative supply" );
        ts += s;
    }
    for ( const auto& d : demand )
    {
        if ( d.sign() < 0 )
            fail( ErrorCode::infeasible_marginals, "negative demand" );
        td += d;
    }
    if ( ts != td )
        fail( ErrorCode::infeasible_marginals, "marginals have different mass " + ts.str() + " and " + td.str() );
    if ( cost.size() != m )
        fail( ErrorCode::internal, "cost matrix shape" );
    for ( const auto& row : cost )
        if ( row.size() != n )
            fail( ErrorCode::internal, "cost matrix shape" );

    std::vector<std::vector<Rational>> flow( m, std::vector<Rational>( n ) );
    std::vector<std::vector<bool>> basic( m, std::vector<bool>( n, false ) );

    // Northwest corner; when a row and a column are exhausted together only
    // the row advances, leaving a zero basic cell below.
    {
        std::vector<Rational> s = supply, d = demand;
        std::size_t i = 0, j = 0;
        while ( i < m && j < n )
        {
            Rational q = min( s[ i ], d[ j ] );
            flow[ i ][ j ] = q;
            basic[ i ][ j ] = true;
            s[ i ] -= q;
            d[ j ] -= q;
            if ( i == m - 1 )
                ++j;
            else if ( j == n - 1 )
                ++i;
            else if ( s[ i ].is_zero() )
                ++i;
            else
                ++j;
        }
    }

    TransportResult out;
    for ( ;; )
    {
        // Potentials u_i + v_j = c_ij on basic cells, u_0 = 0.
        std::vector<std::optional<Rational>> u( m ), v( n );
        u[ 0 ] = Rational( 0 );
        for ( bool changed = true; changed; )
        {
            changed = false;
            for ( std::size_t i = 0; i < m; ++i )
                for ( std::size_t j = 0; j < n; ++j )
                {
                    if ( !basic[ i ][ j ] )
                        continue;
                    if ( u[ i ] && !v[ j ] )
                    {
                        v[ j ] = cost[ i ][ j ] - *u[ i ];
                        changed = true;
                    }
                    else if ( v[ j ] && !u[ i ] )
                    {
                        u[ i ] = cost[ i ][ j ] - *v[ j ];
                        changed = true;
                    }
                }
        }
        for ( const auto& x : u )
            if ( !x )
                fail( ErrorCode::internal, "transport basis is not spanning" );
        for ( const auto& x : v )
            if ( !x )
                fail( ErrorCode::internal, "transport basis is not spanning" );

        // Entering: first non-basic cell in row-major order with negative reduced cost.
        std::optional<std::pair<std::size_t, std::size_t>> enter;
        for ( std::size_t i = 0; i < m && !enter; ++i )
            for ( std::size_t j = 0; j < n && !enter; ++j )
                if ( !basic[ i ][ j ] && cost[ i ][ j ] - *u[ i ] - *v[ j ] < Rational( 0 ) )
                    enter = std::pair{ i, j };
        if ( !enter )
            break;
        const auto [ ei, ej ] = *enter;

        // Path in the basis tree from row ei to column ej. Nodes: rows 0..m-1, columns m..m+n-1.
        std::vector<std::optional<std::size_t>> parent( m + n );
        std::vector<bool> seen( m + n, false );
        std::vector<std::size_t> queue{ ei };
        seen[ ei ] = true;
        for ( std::size_t q = 0; q < queue.size(); ++q )
        {
            std::size_t node = queue[ q ];
            if ( node < m )
            {
                for ( std::size_t j = 0; j < n; ++j )
                    if ( basic[ node ][ j ] && !seen[ m + j ] )
                    {
                        seen[ m + j ] = true;
                        parent[ m + j ] = node;
                        queue.push_back( m + j );
                    }
            }
            else
            {
                for ( std::size_t i = 0; i < m; ++i )
                    if ( basic[ i ][ node - m ] && !seen[ i ] )
                    {
                        seen[ i ] = true;
                        parent[ i ] = node;
                        queue.push_back( i );
                    }
            }
        }
        if ( !seen[ m + ej ] )
            fail( ErrorCode::internal, "transport basis is not connected" );

        // Cells along the path from column ej back to row ei; the one touching
        // column ej loses flow, then signs alternate.
        std::vector<std::pair<std::size_t, std::size_t>> cycle;
        for ( std::size_t node = m + ej; node != ei; node = *parent[ node ] )
        {
            std::size_t other = *parent[ node ];
            cycle.push_back( node < m ? std::pair{ node, other - m } : std::pair{ other, node - m } );
        }
        // Leaving: minimal flow among '-' cells, smallest index on ties.
        std::optional<std::pair<std::size_t, std::size_t>> leave;
        Rational theta;
        for ( std::size_t k = 0; k < cycle.size(); k += 2 )
        {
            const auto [ i, j ] = cycle[ k ];
            if ( !leave || flow[ i ][ j ] < theta || ( flow[ i ][ j ] == theta && cycle[ k ] < *leave ) )
            {
                leave = cycle[ k ];
                theta = flow[ i ][ j ];
            }
        }
        for ( std::size_t k = 0; k < cycle.size(); ++k )
        {
            const auto [ i, j ] = cycle[ k ];
            if ( k % 2 == 0 )
                flow[ i ][ j ] -= theta;
            else
                flow[ i ][ j ] += theta;
        }
        flow[ ei ][ ej ] = theta;
        basic[ ei ][ ej ] = true;
        basic[ leave->first ][ leave->second ] = false;
        ++out.pivots;
    }

    for ( std::size_t i = 0; i < m; ++i )
        for ( std::size_t j = 0; j < n; ++j )
            out.cost += flow[ i ][ j ] * cost[ i ][ j ];
    out.flow = std::move( flow );
    return out;
}

} // namespace ptsm
