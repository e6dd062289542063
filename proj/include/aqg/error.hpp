#pragma once

#include <stdexcept>
#include <string>

namespace aqg {

enum class errc {
  dimension_mismatch,
  factor_mismatch,
  schema,
  overflow,
  not_exact,
  no_solution,
  non_unique,
  no_invariant_functional,
  not_positive,
  not_faithful,
  not_multiplicative,
  not_tracial,
  not_a_state,
  not_compact_type,
  not_symmetric,
  singular_transfer,
  dimension_too_large,
  ball_too_large,
  no_positive_solution,
  non_confluent_relations,
  haar_system_inconsistent,
  not_psd,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::factor_mismatch: return "FactorMismatch";
    case errc::schema: return "SchemaError";
    case errc::overflow: return "Overflow";
    case errc::not_exact: return "NotExactlyRepresentable";
    case errc::no_solution: return "NoSolution";
    case errc::non_unique: return "NonUnique";
    case errc::no_invariant_functional: return "NoInvariantFunctional";
    case errc::not_positive: return "NotPositive";
    case errc::not_faithful: return "NotFaithful";
    case errc::not_multiplicative: return "NotMultiplicative";
    case errc::not_tracial: return "NotTracial";
    case errc::not_a_state: return "NotAState";
    case errc::not_compact_type: return "NotCompactType";
    case errc::not_symmetric: return "NotSymmetric";
    case errc::singular_transfer: return "SingularTransfer";
    case errc::dimension_too_large: return "DimensionTooLarge";
    case errc::ball_too_large: return "BallTooLarge";
    case errc::no_positive_solution: return "NoPositiveSolution";
    case errc::non_confluent_relations: return "NonConfluentRelations";
    case errc::haar_system_inconsistent: return "HaarSystemInconsistent";
    case errc::not_psd: return "NotPSD";
  }
  return "Unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

}  // namespace aqg
