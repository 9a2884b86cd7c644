#pragma once

#include <stdexcept>
#include <string>

namespace lcm {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};
struct NotEmbeddable : Error {
  using Error::Error;
};
struct Diverges : Error {
  using Error::Error;
};
struct NonConvergence : Error {
  using Error::Error;
};
struct IllConditioned : Error {
  using Error::Error;
};
struct UnresolvedBand : Error {
  using Error::Error;
};
struct GridTooCoarse : Error {
  using Error::Error;
};
struct InfeasibleError : Error {
  using Error::Error;
};

}  // namespace lcm
