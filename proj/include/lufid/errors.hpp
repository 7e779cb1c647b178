#pragma once

#include <stdexcept>
#include <string>

namespace lufid {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input validation
struct NotHermitian : Error { using Error::Error; };
struct NotPSD : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct BadParameter : Error { using Error::Error; };
struct BadSpectrum : Error { using Error::Error; };
struct BadConfig : Error { using Error::Error; };
struct InvalidChannel : Error { using Error::Error; };
struct MissingWitness : Error { using Error::Error; };
struct DimensionTooLarge : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

// Numerical failures
struct NonFinite : Error { using Error::Error; };
struct SingularRetraction : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };

}  // namespace lufid
