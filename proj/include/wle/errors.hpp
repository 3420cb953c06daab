#pragma once

#include <stdexcept>
#include <string>

namespace wle {

// Base class for all library errors.  Each concrete error carries a stable
// exit code so the CLI can map failures to distinct process statuses.
class Error : public std::runtime_error {
 public:
  Error(int exit_code, const std::string& what)
      : std::runtime_error(what), exit_code_(exit_code) {}
  int exit_code() const noexcept { return exit_code_; }

 private:
  int exit_code_;
};

#define WLE_DEFINE_ERROR(name, code)                          \
  class name : public Error {                                 \
   public:                                                    \
    explicit name(const std::string& what) : Error(code, what) {} \
  }

// graph construction
WLE_DEFINE_ERROR(IndexOutOfRange, 10);
WLE_DEFINE_ERROR(SelfLoop, 11);
WLE_DEFINE_ERROR(LabelOutOfAlphabet, 12);

// SMILES parsing
WLE_DEFINE_ERROR(EmptyInput, 20);
WLE_DEFINE_ERROR(UnknownAtom, 21);
WLE_DEFINE_ERROR(UnbalancedParenthesis, 22);
WLE_DEFINE_ERROR(DanglingRingClosure, 23);
WLE_DEFINE_ERROR(SmilesSyntaxError, 24);

// label registry / embeddings
WLE_DEFINE_ERROR(UninternedLabel, 30);

// autodiff
WLE_DEFINE_ERROR(DimensionMismatch, 40);
WLE_DEFINE_ERROR(NonScalarOutput, 41);

// training
WLE_DEFINE_ERROR(EmptyDataset, 50);
WLE_DEFINE_ERROR(TargetTypeMismatch, 51);
WLE_DEFINE_ERROR(WrongEmbeddingVariant, 52);

// synthetic generation
WLE_DEFINE_ERROR(InfeasibleDegreeSequence, 60);
WLE_DEFINE_ERROR(GenerationBudgetExceeded, 61);

// representability checks
WLE_DEFINE_ERROR(SizeOverflow, 70);
WLE_DEFINE_ERROR(DimensionTooSmall, 71);

// metrics
WLE_DEFINE_ERROR(LengthMismatch, 80);
WLE_DEFINE_ERROR(EmptyMetricInput, 81);
WLE_DEFINE_ERROR(SingleClass, 82);
WLE_DEFINE_ERROR(EmptyReplacementPool, 83);

// serialization / IO
WLE_DEFINE_ERROR(IoError, 90);
WLE_DEFINE_ERROR(FormatError, 91);

#undef WLE_DEFINE_ERROR

}  // namespace wle
