#ifndef GRIDBANK_ERRORS_HPP
#define GRIDBANK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gridbank {

// Base class for every recoverable data error the library throws.
// Structural problems in documents are *reported* (see ValidationReport),
// not thrown; exceptions are reserved for conditions that make the
// requested operation impossible.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

#define GRIDBANK_DEFINE_ERROR(Name)                                          \
  class Name : public Error {                                                \
  public:                                                                    \
    using Error::Error;                                                      \
  }

GRIDBANK_DEFINE_ERROR(EncodingError);      // input is not valid UTF-8
GRIDBANK_DEFINE_ERROR(ParseError);         // malformed file, message names line/column
GRIDBANK_DEFINE_ERROR(ValidationError);    // document failed structural validation
GRIDBANK_DEFINE_ERROR(LengthMismatch);     // parallel layers differ in length
GRIDBANK_DEFINE_ERROR(ConflictingRules);   // two splits of equal priority disagree
GRIDBANK_DEFINE_ERROR(InvalidSpans);       // span list is out of range or overlaps
GRIDBANK_DEFINE_ERROR(StructureError);     // grid violates a structural invariant
GRIDBANK_DEFINE_ERROR(DuplicateFunction);  // sibling function labels collide
GRIDBANK_DEFINE_ERROR(NoHeadFound);        // head rules yield no candidate
GRIDBANK_DEFINE_ERROR(CycleDetected);      // dependency heads form a cycle
GRIDBANK_DEFINE_ERROR(MultipleRoots);      // more than one root in a sentence
GRIDBANK_DEFINE_ERROR(DegenerateData);     // agreement undefined (no variation)
GRIDBANK_DEFINE_ERROR(TokenMismatch);      // grids cover different token sequences
GRIDBANK_DEFINE_ERROR(EmptyTraining);      // no training pairs supplied
GRIDBANK_DEFINE_ERROR(SizeExceedsData);    // requested train size beyond data
GRIDBANK_DEFINE_ERROR(EmptyDocument);      // operation needs a non-empty document
GRIDBANK_DEFINE_ERROR(DegenerateMatrix);   // zero variance or non-convergence
GRIDBANK_DEFINE_ERROR(MissingFeature);     // feature vector lacks a model feature
GRIDBANK_DEFINE_ERROR(InvalidWindow);      // window/stride outside valid range
GRIDBANK_DEFINE_ERROR(DegenerateInput);    // correlation over constant input
GRIDBANK_DEFINE_ERROR(IoError);            // file could not be read or written

#undef GRIDBANK_DEFINE_ERROR

} // namespace gridbank

#endif
