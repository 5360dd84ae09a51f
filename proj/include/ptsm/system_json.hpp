#pragma once

#include "system.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace ptsm
{

using Json = nlohmann::ordered_json;

/// Reads a rational stored as a JSON string "n/d". Numbers are refused so
/// that no float ever enters the core; `where` names the offending field.
inline Rational rational_from_json( const Json& j, const std::string& where )
{
    if ( !j.is_string() )
        fail( ErrorCode::syntax, "expected a rational string \"n/d\" at " + where + ", got " + j.dump() );
    auto r = Rational::try_parse( j.get<std::string>() );
    if ( !r )
        fail( ErrorCode::syntax, "malformed rational \"" + j.get<std::string>() + "\" at " + where );
    return *r;
}

inline Json rational_to_json( const Rational& r ) { return r.str(); }

/// Canonical system format:
/// {"atoms":[...], "states":[{"label":..., "valuation":{atom:"n/d"},
///   "successors":{label:"n/d"} | null}]}
/// Atoms absent from a valuation default to 0.
inline RawSystem raw_system_from_json( const Json& j )
{
    if ( !j.is_object() || !j.contains( "states" ) || !j[ "states" ].is_array() )
        fail( ErrorCode::syntax, "system JSON must be an object with a \"states\" array" );
    RawSystem raw;
    if ( j.contains( "atoms" ) )
    {
        if ( !j[ "atoms" ].is_array() )
            fail( ErrorCode::syntax, "\"atoms\" must be an array" );
        for ( const auto& a : j[ "atoms" ] )
        {
            if ( !a.is_string() )
                fail( ErrorCode::syntax, "atom names must be strings" );
            raw.atoms.push_back( a.get<std::string>() );
        }
    }

    const auto& states = j[ "states" ];
    std::map<std::string, StateId> by_label;
    for ( std::size_t i = 0; i < states.size(); ++i )
    {
        const auto& st = states[ i ];
        if ( !st.is_object() )
            fail( ErrorCode::syntax, "states[" + std::to_string( i ) + "] is not an object" );
        std::string label = st.contains( "label" ) ? st[ "label" ].get<std::string>() : "s" + std::to_string( i );
        if ( !by_label.emplace( label, i ).second )
            fail( ErrorCode::parameter, "duplicate state label '" + label + "'" );
        raw.add_state( label );
    }

    for ( std::size_t i = 0; i < states.size(); ++i )
    {
        const auto& st = states[ i ];
        const std::string where = "states[" + std::to_string( i ) + "]";
        if ( st.contains( "valuation" ) )
        {
            if ( !st[ "valuation" ].is_object() )
                fail( ErrorCode::syntax, where + ".valuation must be an object" );
            for ( const auto& [ atom, value ] : st[ "valuation" ].items() )
            {
                auto it = std::find( raw.atoms.begin(), raw.atoms.end(), atom );
                if ( it == raw.atoms.end() )
                    fail( ErrorCode::unknown_atom, "atom '" + atom + "' at " + where + " is not declared" );
                raw.states[ i ].valuation[ it - raw.atoms.begin() ] =
                    rational_from_json( value, where + ".valuation." + atom );
            }
        }
        if ( !st.contains( "successors" ) || st[ "successors" ].is_null() )
            continue;
        if ( !st[ "successors" ].is_object() )
            fail( ErrorCode::syntax, where + ".successors must be an object or null" );
        raw.states[ i ].successors.emplace();
        for ( const auto& [ target, weight ] : st[ "successors" ].items() )
        {
            auto it = by_label.find( target );
            if ( it == by_label.end() )
                fail( ErrorCode::dangling_state, "successor '" + target + "' at " + where + " is not a state" );
            raw.states[ i ].successors->emplace_back( it->second,
                                                      rational_from_json( weight, where + ".successors." + target ) );
        }
    }
    return raw;
}

inline TransitionSystem system_from_json( const Json& j ) { return validate_system( raw_system_from_json( j ) ); }

inline Json system_to_json( const TransitionSystem& sys )
{
    Json j;
    j[ "atoms" ] = sys.atoms();
    Json states = Json::array();
    for ( StateId s = 0; s < sys.state_count(); ++s )
    {
        Json st;
        st[ "label" ] = sys.label( s );
        Json val = Json::object();
        for ( std::size_t p = 0; p < sys.atoms().size(); ++p )
            val[ sys.atoms()[ p ] ] = rational_to_json( sys.value( s, p ) );
        st[ "valuation" ] = std::move( val );
        if ( const auto& succ = sys.successors( s ) )
        {
            Json out = Json::object();
            for ( const auto& e : *succ )
                out[ sys.label( e.state ) ] = rational_to_json( e.weight );
            st[ "successors" ] = std::move( out );
        }
        else
            st[ "successors" ] = nullptr;
        states.push_back( std::move( st ) );
    }
    j[ "states" ] = std::move( states );
    return j;
}

inline Json parse_json_text( const std::string& text, const std::string& source )
{
    try
    {
        return Json::parse( text );
    }
    catch ( const Json::parse_error& e )
    {
        throw Error( ErrorCode::syntax, source + ": " + e.what(), e.byte );
    }
}

inline std::string read_file( const std::string& path )
{
    std::ifstream in( path, std::ios::binary );
    if ( !in )
        fail( ErrorCode::io, "cannot open '" + path + "'" );
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline TransitionSystem load_system( const std::string& path )
{
    return system_from_json( parse_json_text( read_file( path ), path ) );
}

} // namespace ptsm
