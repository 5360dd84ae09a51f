#pragma once

#include "rational.hpp"

#include <gmpxx.h>

#include <vector>

namespace ptsm
{

enum class Relation
{
    le,
    eq,
    ge
};

/// maximize c.x subject to rows, x >= 0.
struct LinearProgram
{
    struct Row
    {
        std::vector<Rational> coef;
        Relation rel = Relation::le;
        Rational rhs;
    };

    std::size_t n_vars = 0;
    std::vector<Rational> objective;
    std::vector<Row> rows;

    void add_row( std::vector<Rational> coef, Relation rel, Rational rhs )
    {
        coef.resize( n_vars );
        rows.push_back( { std::move( coef ), rel, std::move( rhs ) } );
    }
};

struct LpResult
{
    enum class Status
    {
        optimal,
        infeasible,
        unbounded
    };
    Status status = Status::infeasible;
    Rational value;
    std::vector<Rational> x;
    std::size_t pivots = 0;
};

namespace detail
{

// Dense tableau in exact arithmetic. Column layout: structural variables,
// then slack/surplus, then artificials; the last column is the rhs.
class Tableau
{
public:
    std::vector<std::vector<mpq_class>> a; // constraint rows
    std::vector<mpq_class> z;              // reduced-cost row: z[j] = c_j - c_B B^-1 A_j, z[rhs] = -objective
    std::vector<std::size_t> basis;
    std::size_t cols = 0;                  // without rhs
    std::size_t pivots = 0;

    std::size_t rhs() const { return cols; }

    void pivot( std::size_t r, std::size_t c )
    {
        ++pivots;
        auto& pr = a[ r ];
        const mpq_class p = pr[ c ];
        for ( std::size_t j = 0; j <= cols; ++j )
            if ( sgn( pr[ j ] ) != 0 )
                pr[ j ] /= p;
        auto eliminate = [ & ]( std::vector<mpq_class>& row ) {
            if ( sgn( row[ c ] ) == 0 )
                return;
            const mpq_class f = row[ c ];
            for ( std::size_t j = 0; j <= cols; ++j )
                if ( sgn( pr[ j ] ) != 0 )
                    row[ j ] -= f * pr[ j ];
        };
        for ( std::size_t i = 0; i < a.size(); ++i )
            if ( i != r )
                eliminate( a[ i ] );
        eliminate( z );
        basis[ r ] = c;
    }

    // Maximizes with Bland's rule over columns < limit. Returns false when
    // unbounded.
    bool optimize( std::size_t limit )
    {
        for ( ;; )
        {
            std::size_t enter = limit;
            for ( std::size_t j = 0; j < limit; ++j )
                if ( sgn( z[ j ] ) > 0 )
                {
                    enter = j;
                    break;
                }
            if ( enter == limit )
                return true;
            std::size_t leave = a.size();
            mpq_class best;
            for ( std::size_t i = 0; i < a.size(); ++i )
            {
                if ( sgn( a[ i ][ enter ] ) <= 0 )
                    continue;
                mpq_class ratio = a[ i ][ rhs() ] / a[ i ][ enter ];
                if ( leave == a.size() || ratio < best || ( ratio == best && basis[ i ] < basis[ leave ] ) )
                {
                    leave = i;
                    best = ratio;
                }
            }
            if ( leave == a.size() )
                return false;
            pivot( leave, enter );
        }
    }

    void set_objective( const std::vector<mpq_class>& c )
    {
        z.assign( cols + 1, 0 );
        for ( std::size_t j = 0; j < c.size(); ++j )
            z[ j ] = c[ j ];
        for ( std::size_t i = 0; i < a.size(); ++i )
        {
            const mpq_class cb = basis[ i ] < c.size() ? c[ basis[ i ] ] : mpq_class( 0 );
            if ( sgn( cb ) == 0 )
                continue;
            for ( std::size_t j = 0; j <= cols; ++j )
                z[ j ] -= cb * a[ i ][ j ];
        }
    }
};

} // namespace detail

/// Exact two-phase primal simplex with Bland's smallest-index rule, so it
/// terminates on degenerate programs.
inline LpResult solve_lp( const LinearProgram& lp )
{
    const std::size_t n = lp.n_vars;
    const std::size_t m = lp.rows.size();
    if ( lp.objective.size() != n )
        fail( ErrorCode::internal, "objective length differs from variable count" );

    // Normalize to non-negative right-hand sides.
    struct Norm
    {
        std::vector<mpq_class> coef;
        Relation rel;
        mpq_class rhs;
    };
    std::vector<Norm> rows;
    rows.reserve( m );
    std::size_t n_slack = 0, n_art = 0;
    for ( const auto& r : lp.rows )
    {
        if ( r.coef.size() != n )
            fail( ErrorCode::internal, "constraint row length differs from variable count" );
        Norm nr{ {}, r.rel, r.rhs.raw() };
        nr.coef.reserve( n );
        for ( const auto& c : r.coef )
            nr.coef.push_back( c.raw() );
        if ( sgn( nr.rhs ) < 0 )
        {
            for ( auto& c : nr.coef )
                c = -c;
            nr.rhs = -nr.rhs;
            if ( nr.rel == Relation::le )
                nr.rel = Relation::ge;
            else if ( nr.rel == Relation::ge )
                nr.rel = Relation::le;
        }
        n_slack += nr.rel != Relation::eq;
        n_art += nr.rel != Relation::le;
        rows.push_back( std::move( nr ) );
    }

    detail::Tableau t;
    t.cols = n + n_slack + n_art;
    t.a.assign( m, std::vector<mpq_class>( t.cols + 1 ) );
    t.basis.assign( m, 0 );
    std::size_t next_slack = n, next_art = n + n_slack;
    for ( std::size_t i = 0; i < m; ++i )
    {
        auto& row = t.a[ i ];
        for ( std::size_t j = 0; j < n; ++j )
            row[ j ] = rows[ i ].coef[ j ];
        row[ t.rhs() ] = rows[ i ].rhs;
        switch ( rows[ i ].rel )
        {
        case Relation::le:
            row[ next_slack ] = 1;
            t.basis[ i ] = next_slack++;
            break;
        case Relation::ge:
            row[ next_slack++ ] = -1;
            row[ next_art ] = 1;
            t.basis[ i ] = next_art++;
            break;
        case Relation::eq:
            row[ next_art ] = 1;
            t.basis[ i ] = next_art++;
            break;
        }
    }

    LpResult result;
    const std::size_t first_art = n + n_slack;
    if ( n_art > 0 )
    {
        // Phase one: maximize minus the sum of artificials.
        std::vector<mpq_class> c1( t.cols, 0 );
        for ( std::size_t j = first_art; j < t.cols; ++j )
            c1[ j ] = -1;
        t.set_objective( c1 );
        t.optimize( t.cols );
        if ( sgn( t.z[ t.rhs() ] ) != 0 )
        {
            result.status = LpResult::Status::infeasible;
            result.pivots = t.pivots;
            return result;
        }
        // Drive remaining (zero-valued) artificials out of the basis; drop
        // rows that are linear combinations of the others.
        for ( std::size_t i = 0; i < t.a.size(); )
        {
            if ( t.basis[ i ] < first_art )
            {
                ++i;
                continue;
            }
            std::size_t col = first_art;
            for ( std::size_t j = 0; j < first_art; ++j )
                if ( sgn( t.a[ i ][ j ] ) != 0 )
                {
                    col = j;
                    break;
                }
            if ( col < first_art )
            {
                t.pivot( i, col );
                ++i;
            }
            else
            {
                t.a.erase( t.a.begin() + static_cast<std::ptrdiff_t>( i ) );
                t.basis.erase( t.basis.begin() + static_cast<std::ptrdiff_t>( i ) );
            }
        }
    }

    std::vector<mpq_class> c2( n );
    for ( std::size_t j = 0; j < n; ++j )
        c2[ j ] = lp.objective[ j ].raw();
    t.set_objective( c2 );
    // Artificial columns are never allowed to re-enter.
    if ( !t.optimize( first_art ) )
    {
        result.status = LpResult::Status::unbounded;
        result.pivots = t.pivots;
        return result;
    }

    result.status = LpResult::Status::optimal;
    result.x.assign( n, Rational( 0 ) );
    for ( std::size_t i = 0; i < t.a.size(); ++i )
        if ( t.basis[ i ] < n )
            result.x[ t.basis[ i ] ] = Rational::from_mpq( t.a[ i ][ t.rhs() ] );
    for ( std::size_t j = 0; j < n; ++j )
        result.value += lp.objective[ j ] * result.x[ j ];
    result.pivots = t.pivots;
    return result;
}

} // namespace ptsm
