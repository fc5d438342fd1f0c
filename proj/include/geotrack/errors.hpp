#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geotrack {

enum class ErrorKind {
  NotSkew,
  NearAntipodal,
  NonFinite,
  RankDeficient,
  BadParams,
  ZeroThrustDirection,
  HeadingSingular,
  ConfigError,
  IoError,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSkew: return "NotSkew";
    case ErrorKind::NearAntipodal: return "NearAntipodal";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::ZeroThrustDirection: return "ZeroThrustDirection";
    case ErrorKind::HeadingSingular: return "HeadingSingular";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can map it onto an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace geotrack
