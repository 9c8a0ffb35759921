#pragma once

#include <stdexcept>
#include <string>

namespace ftvp {

enum class Errc {
  DimensionMismatch,
  SingularPencil,
  NonPsdCovariance,
  InfeasibleParams,
  NoConvergence,
  PeriodFailure,
  UnstableInput,
  BlockSingular,
  PathLengthMismatch,
  InsufficientTrainingData,
  RankDeficientRegressors,
  NumericalOverflow,
  RankTooLow,
  DegenerateLosses,
  TooFewDraws,
  DegenerateHits,
  NonPositiveLogInput,
  MalformedDate,
  RaggedRows,
  MissingValue,
  InvalidConfig,
  InvalidArgument,
  Io,
};

const char* errc_name(Errc c);

// Library-wide exception. `index` carries a period, row or draw number when
// the error refers to one (-1 otherwise).
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, long index = -1)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code),
        index_(index) {}
  Errc code() const { return code_; }
  long index() const { return index_; }

 private:
  Errc code_;
  long index_;
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::SingularPencil: return "SingularPencil";
    case Errc::NonPsdCovariance: return "NonPsdCovariance";
    case Errc::InfeasibleParams: return "InfeasibleParams";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::PeriodFailure: return "PeriodFailure";
    case Errc::UnstableInput: return "UnstableInput";
    case Errc::BlockSingular: return "BlockSingular";
    case Errc::PathLengthMismatch: return "PathLengthMismatch";
    case Errc::InsufficientTrainingData: return "InsufficientTrainingData";
    case Errc::RankDeficientRegressors: return "RankDeficientRegressors";
    case Errc::NumericalOverflow: return "NumericalOverflow";
    case Errc::RankTooLow: return "RankTooLow";
    case Errc::DegenerateLosses: return "DegenerateLosses";
    case Errc::TooFewDraws: return "TooFewDraws";
    case Errc::DegenerateHits: return "DegenerateHits";
    case Errc::NonPositiveLogInput: return "NonPositiveLogInput";
    case Errc::MalformedDate: return "MalformedDate";
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::MissingValue: return "MissingValue";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace ftvp
