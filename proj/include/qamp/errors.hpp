#pragma once

#include <stdexcept>
#include <string>

namespace qamp {

/// Parameter-domain violation; carries the name of the offending field.
class validation_error : public std::invalid_argument {
public:
    validation_error(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A state or source whose trace vanished where a division is required.
class degenerate_state_error : public std::runtime_error {
public:
    explicit degenerate_state_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// Analytical result left its admissible range (non-perturbative inputs).
class regime_violation_error : public std::runtime_error {
public:
    explicit regime_violation_error(const std::string& what)
        : std::runtime_error(what) {}
};

/// Fock-space caps too small for the injected photons. Configuration error:
/// truncation must be lossless, never silent clipping.
class truncation_overflow_error : public std::logic_error {
public:
    explicit truncation_overflow_error(const std::string& what)
        : std::logic_error(what) {}
};

} // namespace qamp
