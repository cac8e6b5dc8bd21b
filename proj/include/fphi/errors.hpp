#pragma once

#include <stdexcept>
#include <string>

namespace fphi {

// Base of every error raised by the library. The CLI maps PrecisionExhausted
// to exit code 3 and everything else to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define FPHI_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                   \
    public:                                                       \
        explicit Name(const std::string& what) : Error(what) {}   \
    }

FPHI_DEFINE_ERROR(InvalidArgument);
FPHI_DEFINE_ERROR(DivisionByZero);
FPHI_DEFINE_ERROR(NonSimpleRoot);
FPHI_DEFINE_ERROR(ZeroPolynomial);
FPHI_DEFINE_ERROR(PrecisionExhausted);
FPHI_DEFINE_ERROR(ColumnMismatch);
FPHI_DEFINE_ERROR(NonSquare);
FPHI_DEFINE_ERROR(HasseViolation);
FPHI_DEFINE_ERROR(ModeMismatch);
FPHI_DEFINE_ERROR(ContextMismatch);
FPHI_DEFINE_ERROR(NonSplitExtension);
FPHI_DEFINE_ERROR(ClosureFailure);
FPHI_DEFINE_ERROR(UnclassifiedShape);

#undef FPHI_DEFINE_ERROR

}  // namespace fphi
