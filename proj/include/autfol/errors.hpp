#pragma once

#include <stdexcept>
#include <string>

namespace autfol {

// Stable error identifiers. CLI maps these onto exit codes, tests match on
// the code rather than the message text.
enum class errc {
    not_odd_prime,
    empty_exponents,
    budget_exceeded,
    ambient_mismatch,
    ill_formed,
    not_invertible,
    not_involution,
    not_extreme,
    not_commuting,
    neither_side_contains,
    precondition_violated,
    order_violation,
    not_encoder,
    syntax_error,
    unknown_primitive,
    arity_mismatch,
    duplicate_name,
    io_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) {
    throw error(code, what);
}

} // namespace autfol
