#pragma once

namespace quadmod {

enum class Method { SC, FEM };

/// A modulus value with its computing method and an estimated absolute error.
struct ModulusEstimate {
  double value = 0.0;
  Method method = Method::SC;
  double err = 0.0;
};

}  // namespace quadmod
