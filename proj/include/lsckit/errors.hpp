#pragma once

#include <stdexcept>
#include <string>

namespace lsckit {

/// Base class for all library errors.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Raised when an instance exceeds the exact-analysis size limits.
/// CLI maps this (and only this) family to the "limit exceeded" exit code.
class LimitError : public Error {
   public:
    using Error::Error;
};

#define LSCKIT_DEFINE_ERROR(name, base) \
    class name : public base {          \
       public:                          \
        using base::base;               \
    }

// galois
LSCKIT_DEFINE_ERROR(NonPrimeOrder, Error);
LSCKIT_DEFINE_ERROR(ReduciblePolynomial, Error);
LSCKIT_DEFINE_ERROR(DimensionMismatch, Error);
LSCKIT_DEFINE_ERROR(SingularMatrix, Error);
LSCKIT_DEFINE_ERROR(InconsistentSystem, Error);
LSCKIT_DEFINE_ERROR(BlockTooLong, Error);
LSCKIT_DEFINE_ERROR(BadParameters, Error);
LSCKIT_DEFINE_ERROR(RankDeficientInput, Error);

// lsc
LSCKIT_DEFINE_ERROR(LengthMismatch, Error);
LSCKIT_DEFINE_ERROR(IndexOutOfRange, Error);

// infotheory / secrecy
LSCKIT_DEFINE_ERROR(OutOfRange, Error);
LSCKIT_DEFINE_ERROR(BadCoordinates, Error);
LSCKIT_DEFINE_ERROR(TooLarge, LimitError);

// bounds
LSCKIT_DEFINE_ERROR(NonPositiveA, Error);
LSCKIT_DEFINE_ERROR(NegativeB, Error);
LSCKIT_DEFINE_ERROR(BadT, Error);
LSCKIT_DEFINE_ERROR(BadWeights, Error);
LSCKIT_DEFINE_ERROR(NotBalanced, Error);

// boolfourier
LSCKIT_DEFINE_ERROR(BadPmf, Error);

// cipher
LSCKIT_DEFINE_ERROR(KeyOutOfRange, Error);
LSCKIT_DEFINE_ERROR(KeyTooShort, Error);
LSCKIT_DEFINE_ERROR(BadContainer, Error);
LSCKIT_DEFINE_ERROR(BadKey, Error);
LSCKIT_DEFINE_ERROR(CorruptPhase, Error);

#undef LSCKIT_DEFINE_ERROR

}  // namespace lsckit
