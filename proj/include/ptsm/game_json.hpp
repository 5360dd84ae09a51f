#pragma once

#include "game.hpp"
#include "system_json.hpp"

namespace ptsm
{

/// Certificates refer to states by label:
/// {"a":"x","b":"y","eps":"3/16","rounds":3,
///  "move":[{"a":"x1","b":"y1","mass":"1/4","slack":"1/4"}, ...] | null,
///  "children":[...]}
inline Json certificate_to_json( const StrategyCertificate& cert, const TransitionSystem& sysA,
                                 const TransitionSystem& sysB )
{
    Json j;
    j[ "a" ] = sysA.label( cert.config.a );
    j[ "b" ] = sysB.label( cert.config.b );
    j[ "eps" ] = cert.config.eps.str();
    j[ "rounds" ] = cert.config.rounds;
    if ( cert.move )
    {
        Json move = Json::array();
        for ( const auto& e : cert.move->entries )
            move.push_back( { { "a", sysA.label( e.a ) },
                              { "b", sysB.label( e.b ) },
                              { "mass", e.mass.str() },
                              { "slack", e.slack.str() } } );
        j[ "move" ] = std::move( move );
    }
    else
        j[ "move" ] = nullptr;
    Json children = Json::array();
    for ( const auto& c : cert.children )
        children.push_back( certificate_to_json( c, sysA, sysB ) );
    j[ "children" ] = std::move( children );
    return j;
}

inline StrategyCertificate certificate_from_json( const Json& j, const TransitionSystem& sysA,
                                                  const TransitionSystem& sysB, const std::string& where = "certificate" )
{
    if ( !j.is_object() )
        fail( ErrorCode::syntax, where + " is not an object" );
    auto label = [ & ]( const Json& node, const char* key, const TransitionSystem& sys, const std::string& at ) {
        if ( !node.contains( key ) || !node[ key ].is_string() )
            fail( ErrorCode::syntax, at + "." + key + " must be a state label" );
        return sys.state( node[ key ].get<std::string>() );
    };
    StrategyCertificate cert;
    cert.config.a = label( j, "a", sysA, where );
    cert.config.b = label( j, "b", sysB, where );
    if ( !j.contains( "eps" ) )
        fail( ErrorCode::syntax, where + ".eps missing" );
    cert.config.eps = rational_from_json( j[ "eps" ], where + ".eps" );
    if ( !j.contains( "rounds" ) || !j[ "rounds" ].is_number_unsigned() )
        fail( ErrorCode::syntax, where + ".rounds must be a natural number" );
    cert.config.rounds = j[ "rounds" ].get<std::size_t>();
    if ( j.contains( "move" ) && !j[ "move" ].is_null() )
    {
        if ( !j[ "move" ].is_array() )
            fail( ErrorCode::syntax, where + ".move must be an array or null" );
        cert.move.emplace();
        for ( std::size_t i = 0; i < j[ "move" ].size(); ++i )
        {
            const auto& e = j[ "move" ][ i ];
            const std::string at = where + ".move[" + std::to_string( i ) + "]";
            cert.move->entries.push_back( { label( e, "a", sysA, at ), label( e, "b", sysB, at ),
                                            rational_from_json( e.value( "mass", Json() ), at + ".mass" ),
                                            rational_from_json( e.value( "slack", Json() ), at + ".slack" ) } );
        }
    }
    if ( j.contains( "children" ) )
    {
        if ( !j[ "children" ].is_array() )
            fail( ErrorCode::syntax, where + ".children must be an array" );
        for ( std::size_t i = 0; i < j[ "children" ].size(); ++i )
            cert.children.push_back( certificate_from_json( j[ "children" ][ i ], sysA, sysB,
                                                            where + ".children[" + std::to_string( i ) + "]" ) );
    }
    return cert;
}

} // namespace ptsm
