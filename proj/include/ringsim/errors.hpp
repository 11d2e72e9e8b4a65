#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ringsim {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed configuration, or inconsistent inputs.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An iterative method stopped before reaching its tolerance.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double achieved)
        : Error(what), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

/// The requested Hilbert space is larger than the configured cap.
class DimensionCapExceeded : public Error {
public:
    DimensionCapExceeded(std::uint64_t requested, std::uint64_t cap)
        : Error("basis dimension " + std::to_string(requested) + " exceeds cap " +
                std::to_string(cap)),
          requested_(requested), cap_(cap) {}

    std::uint64_t requested() const noexcept { return requested_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t requested_;
    std::uint64_t cap_;
};

}  // namespace ringsim
