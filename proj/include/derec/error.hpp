#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace derec {

// Error families map 1:1 onto CLI exit codes.
enum class ErrorFamily : int {
    Input = 2,
    Schema = 3,
    Pipeline = 4,
    ExternalTimeout = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorFamily family, std::string kind, const std::string& message)
        : std::runtime_error(kind + ": " + message),
          family_(family),
          kind_(std::move(kind)) {}

    ErrorFamily family() const noexcept { return family_; }
    const std::string& kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(family_); }

private:
    ErrorFamily family_;
    std::string kind_;
};

#define DEREC_DEFINE_ERROR(NAME, FAMILY)                       \
    struct NAME : Error {                                      \
        explicit NAME(const std::string& message)              \
            : Error(ErrorFamily::FAMILY, #NAME, message) {}    \
    }

DEREC_DEFINE_ERROR(InputError, Input);
DEREC_DEFINE_ERROR(ParseError, Input);
DEREC_DEFINE_ERROR(EmptyTable, Input);
DEREC_DEFINE_ERROR(SpecInvalid, Input);
DEREC_DEFINE_ERROR(SchemaMismatch, Schema);
DEREC_DEFINE_ERROR(DisjointSubjects, Pipeline);
DEREC_DEFINE_ERROR(UnknownSubject, Pipeline);
DEREC_DEFINE_ERROR(NoContextualColumns, Pipeline);
DEREC_DEFINE_ERROR(EmptyCondition, Pipeline);
DEREC_DEFINE_ERROR(EmptySample, Pipeline);
DEREC_DEFINE_ERROR(PairMismatch, Pipeline);
DEREC_DEFINE_ERROR(MissingArtifact, Pipeline);
DEREC_DEFINE_ERROR(EmptyReport, Pipeline);
DEREC_DEFINE_ERROR(ExternalTimeout, ExternalTimeout);

#undef DEREC_DEFINE_ERROR

}  // namespace derec
