#pragma once

#include <string>
#include <stdexcept>

namespace hrb {

enum class Mode { standard, extended };

/// Scalar arithmetic context shared by the evaluation routines.  Standard
/// mode works in plain doubles (>= 13 reliable digits over short chains),
/// extended mode switches the real-valued weight/coefficient paths to
/// double-double (>= 28 digits per operation).
struct PrecisionCtx {
    Mode mode = Mode::standard;
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;

    static PrecisionCtx standard() { return {Mode::standard, 1e-12, 1e-300}; }
    static PrecisionCtx extended() { return {Mode::extended, 1e-25, 1e-300}; }

    bool is_extended() const { return mode == Mode::extended; }

    /// Unit roundoff of the active scalar type.
    double eps() const { return mode == Mode::extended ? 4.9e-32 : 2.3e-16; }
};

inline Mode parse_mode(const std::string& s) {
    if (s == "standard") return Mode::standard;
    if (s == "extended") return Mode::extended;
    throw std::invalid_argument("unknown precision mode: " + s);
}

inline const char* mode_name(Mode m) {
    return m == Mode::extended ? "extended" : "standard";
}

}  // namespace hrb
