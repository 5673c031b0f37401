#ifndef HITTINGDIM_FITTING_HPP
#define HITTINGDIM_FITTING_HPP

#include <cstddef>
#include <vector>

namespace hittingdim {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n = 0;
};

// ordinary least squares y = a + b x; r2 = 1 for constant y (zero residual)
LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y);

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);        // divisor n-1
double sample_variance(const std::vector<double>& v);  // divisor n-1
double median(std::vector<double> v);                  // by copy

}  // namespace hittingdim

#endif
