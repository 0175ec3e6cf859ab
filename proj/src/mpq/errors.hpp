// Library-wide error types.  Every failure mode carries a stable code
// string (mirrored in the CLI output) plus a human-readable message.
#pragma once

#include <stdexcept>
#include <string>

namespace mpq {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

#define MPQ_DEFINE_ERROR(NAME)                                       \
    class NAME : public Error {                                      \
    public:                                                          \
        explicit NAME(const std::string& message)                    \
            : Error(#NAME, message) {}                               \
    }

MPQ_DEFINE_ERROR(DivisionByZero);
MPQ_DEFINE_ERROR(DivisionByNonUnit);
MPQ_DEFINE_ERROR(OutOfRange);
MPQ_DEFINE_ERROR(UnboundAtom);
MPQ_DEFINE_ERROR(InvalidRank);
MPQ_DEFINE_ERROR(InvalidEpsilon);
MPQ_DEFINE_ERROR(RankMismatch);
MPQ_DEFINE_ERROR(RankTooSmall);
MPQ_DEFINE_ERROR(SmallObstruction);
MPQ_DEFINE_ERROR(NotAMorphism);
MPQ_DEFINE_ERROR(NotStraight);
MPQ_DEFINE_ERROR(NotSplit);
MPQ_DEFINE_ERROR(NotMinimalBasis);
MPQ_DEFINE_ERROR(SymmetricPartMismatch);
MPQ_DEFINE_ERROR(DatumMismatch);
MPQ_DEFINE_ERROR(NonHomogeneous);
MPQ_DEFINE_ERROR(NotCartanType);
MPQ_DEFINE_ERROR(DegreeExceeded);
MPQ_DEFINE_ERROR(InconclusiveDegree);
MPQ_DEFINE_ERROR(JetDivergence);
MPQ_DEFINE_ERROR(Gamma0Violation);
MPQ_DEFINE_ERROR(UnsupportedMixedTerm);
MPQ_DEFINE_ERROR(SizeMismatch);
MPQ_DEFINE_ERROR(NotAntisymmetric);
MPQ_DEFINE_ERROR(NotAltS);
MPQ_DEFINE_ERROR(ParseError);
MPQ_DEFINE_ERROR(InvariantViolation);
MPQ_DEFINE_ERROR(RelationMismatch);
MPQ_DEFINE_ERROR(ConditionFailure);
MPQ_DEFINE_ERROR(VerificationFailure);
MPQ_DEFINE_ERROR(DegreeMismatch);
MPQ_DEFINE_ERROR(CommutationFailure);
MPQ_DEFINE_ERROR(ConfigError);

#undef MPQ_DEFINE_ERROR

} // namespace mpq
