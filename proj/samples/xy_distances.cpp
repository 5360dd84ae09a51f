// Distances on the ten-state x/y system for a few perturbations, read from
// the JSON fixtures. Usage: xy_distances [fixtures-dir]

#include <ptsm/ptsm.hpp>

#include <iostream>

using namespace ptsm;

int main( int argc, char** argv )
{
    const std::string dir = argc > 1 ? argv[ 1 ] : "fixtures";
    try
    {
        for ( const char* eps : { "0", "1_10", "1_4", "1_2" } )
        {
            auto sys = load_system( dir + "/xy_eps_" + eps + ".json" );
            auto chain = behavioural_distance( sys, 3, LiftMethod::wasserstein );
            const StateId x = sys.state( "x" ), y = sys.state( "y" );
            std::cout << "eps " << eps << ": d_3(x, y) = " << chain.at( 3 )( x, y ).str() << "\n";
            for ( const char* a : { "x1", "x2" } )
                for ( const char* b : { "y1", "y2" } )
                    std::cout << "  d_2(" << a << ", " << b
                              << ") = " << chain.at( 2 )( sys.state( a ), sys.state( b ) ).str() << "\n";

            auto plan = wasserstein_lift( chain.at( 2 ), sys.successors( x ), sys.successors( y ) );
            std::cout << "  plan:";
            for ( const auto& e : plan.coupling.entries )
                std::cout << " (" << sys.label( e.a ) << "," << sys.label( e.b ) << ")=" << e.mass.str();
            std::cout << "\n";
        }
    }
    catch ( const Error& e )
    {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
