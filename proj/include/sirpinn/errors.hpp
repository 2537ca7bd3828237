#pragma once

#include <stdexcept>
#include <string>

namespace sirpinn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

#define SIRPINN_ERROR_TYPE(Name)                                   \
    struct Name : Error {                                          \
        explicit Name(const std::string& msg) : Error(msg) {}      \
    }

// numerics
SIRPINN_ERROR_TYPE(StepTooLarge);
SIRPINN_ERROR_TYPE(NonFiniteState);
SIRPINN_ERROR_TYPE(DivisionByZero);

// network engine
SIRPINN_ERROR_TYPE(InvalidArchitecture);
SIRPINN_ERROR_TYPE(ShapeMismatch);

// losses
SIRPINN_ERROR_TYPE(LengthMismatch);
SIRPINN_ERROR_TYPE(SigmaUnderflow);

// data pipeline
SIRPINN_ERROR_TYPE(NegativeMean);
SIRPINN_ERROR_TYPE(WrongCadence);
SIRPINN_ERROR_TYPE(OutOfWindow);
SIRPINN_ERROR_TYPE(MissingColumn);
SIRPINN_ERROR_TYPE(NonContiguousDates);
SIRPINN_ERROR_TYPE(NegativeCount);

// evaluation
SIRPINN_ERROR_TYPE(ZeroReferenceNorm);
SIRPINN_ERROR_TYPE(EmptyWindow);

// training
SIRPINN_ERROR_TYPE(DivergedLoss);

// configuration / CLI
SIRPINN_ERROR_TYPE(ConfigError);

#undef SIRPINN_ERROR_TYPE

}  // namespace sirpinn
