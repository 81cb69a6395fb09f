#pragma once

#include <stdexcept>
#include <string>

namespace dnoband {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// eps * max|b| >= 1, or a profile that violates reality / zero mean.
class DomainError : public Error {
public:
    using Error::Error;
};

// Stiffness matrix failed to factor as positive definite.
class NumericalBreakdown : public Error {
public:
    NumericalBreakdown(const std::string& what, double min_rayleigh)
        : Error(what), min_rayleigh_(min_rayleigh) {}
    double min_rayleigh() const { return min_rayleigh_; }

private:
    double min_rayleigh_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

class GridTooSmall : public Error {
public:
    using Error::Error;
};

// No resolvent eigenvalue within the quasimode residual of tau_app.
class CertificationFailure : public Error {
public:
    using Error::Error;
};

// Call inside a catch block: rethrows the active dnoband error with `context`
// prepended, keeping its type. Other exceptions pass through unchanged.
[[noreturn]] inline void rethrow_with_context(const std::string& context) {
    try {
        throw;
    } catch (const NumericalBreakdown& e) {
        throw NumericalBreakdown(context + ": " + e.what(), e.min_rayleigh());
    } catch (const DomainError& e) {
        throw DomainError(context + ": " + e.what());
    } catch (const GridTooSmall& e) {
        throw GridTooSmall(context + ": " + e.what());
    } catch (const PreconditionError& e) {
        throw PreconditionError(context + ": " + e.what());
    } catch (const CertificationFailure& e) {
        throw CertificationFailure(context + ": " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    } catch (const Error& e) {
        throw Error(context + ": " + e.what());
    }
}

} // namespace dnoband
