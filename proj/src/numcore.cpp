#include "disclocus/numcore.hpp"

namespace disclocus {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidN: return "InvalidN";
    case ErrorCode::DegenerateGamma: return "DegenerateGamma";
    case ErrorCode::GenericStartFailed: return "GenericStartFailed";
    case ErrorCode::CountUnreliable: return "CountUnreliable";
    case ErrorCode::LabelFailed: return "LabelFailed";
    case ErrorCode::PointOutsideBox: return "PointOutsideBox";
    case ErrorCode::WitnessFailed: return "WitnessFailed";
    case ErrorCode::LineDiscarded: return "LineDiscarded";
    case ErrorCode::InvalidClasses: return "InvalidClasses";
    case ErrorCode::EmptyBank: return "EmptyBank";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool all_finite(const CVec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!std::isfinite(v(i).real()) || !std::isfinite(v(i).imag())) return false;
  return true;
}

}  // namespace disclocus
