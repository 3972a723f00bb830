#include "urot/io.hpp"

#include <cmath>

namespace urot {

Measure image_to_measure(const Eigen::MatrixXd& intensity) {
  const Index rows = intensity.rows(), cols = intensity.cols();
  Index nz = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      const double v = intensity(r, c);
      if (!(v >= 0) || !std::isfinite(v))
        throw Error("image: negative or non-finite intensity at (" + std::to_string(r) + ", " +
                    std::to_string(c) + ")");
      nz += v > 0;
    }
  Eigen::MatrixXd pts(2, nz);
  Eigen::VectorXd mass(nz);
  Index k = 0;
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      if (intensity(r, c) == 0) continue;
      pts(0, k) = (static_cast<double>(c) + 0.5) / static_cast<double>(cols);
      pts(1, k) = (static_cast<double>(rows - r) - 0.5) / static_cast<double>(rows);
      mass(k) = intensity(r, c);
      ++k;
    }
  if (nz == 0) return Measure(2);
  return {pts, mass};
}

}  // namespace urot
