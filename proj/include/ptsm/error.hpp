#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptsm
{

enum class ErrorCode
{
    weight_sum,
    range,
    dangling_state,
    atom_mismatch,
    parameter,
    syntax,
    unknown_atom,
    unbound_variable,
    rank_violation,
    slack_too_small,
    not_winnable,
    length_mismatch,
    not_nonexpansive,
    infeasible_marginals,
    io,
    internal
};

inline std::string_view error_code_name( ErrorCode code )
{
    switch ( code )
    {
    case ErrorCode::weight_sum: return "WeightSumError";
    case ErrorCode::range: return "RangeError";
    case ErrorCode::dangling_state: return "DanglingState";
    case ErrorCode::atom_mismatch: return "AtomMismatch";
    case ErrorCode::parameter: return "ParameterError";
    case ErrorCode::syntax: return "SyntaxError";
    case ErrorCode::unknown_atom: return "UnknownAtom";
    case ErrorCode::unbound_variable: return "UnboundVariable";
    case ErrorCode::rank_violation: return "RankViolation";
    case ErrorCode::slack_too_small: return "SlackTooSmall";
    case ErrorCode::not_winnable: return "NotWinnable";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::not_nonexpansive: return "NotNonExpansive";
    case ErrorCode::infeasible_marginals: return "InfeasibleMarginals";
    case ErrorCode::io: return "IOError";
    case ErrorCode::internal: return "InternalError";
    }
    return "Error";
}

// All library failures are reported through this one exception type; the
// code says which contract was broken.
class Error : public std::runtime_error
{
    ErrorCode _code;
    std::optional<std::size_t> _position;

public:
    Error( ErrorCode code, const std::string& message )
        : std::runtime_error( std::string( error_code_name( code ) ) + ": " + message ), _code( code )
    {}

    Error( ErrorCode code, const std::string& message, std::size_t position )
        : std::runtime_error( std::string( error_code_name( code ) ) + ": " + message + " at position "
                              + std::to_string( position ) ),
          _code( code ), _position( position )
    {}

    ErrorCode code() const noexcept { return _code; }
    std::optional<std::size_t> position() const noexcept { return _position; }
};

[[noreturn]] inline void fail( ErrorCode code, const std::string& message )
{
    throw Error( code, message );
}

} // namespace ptsm
