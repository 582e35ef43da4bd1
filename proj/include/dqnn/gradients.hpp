#pragma once

#include <vector>

#include "dqnn/architecture.hpp"

namespace dqnn {

/// d<O>/d(theta_k), one entry per trainable parameter of one shard.
using GradientVector = std::vector<double>;

/// Exact gradient via the +-pi/2 shift rule. O(#params) circuit runs; kept as
/// an oracle and for the grad-check command.
GradientVector parameter_shift_grad(const QnnArchitecture& arch,
                                    std::span<const double> params,
                                    std::span<const double> features,
                                    const Observable& obs);

/// Exact gradients for every observable in one forward plus one reverse sweep.
/// Production path: O(#gates) state updates instead of O(#params) circuit runs.
std::vector<GradientVector> adjoint_grad(const QnnArchitecture& arch,
                                         std::span<const double> params,
                                         std::span<const double> features,
                                         std::span<const Observable> observables);

/// Gradient of sum_k weights[k] * <O_k> via a single weighted adjoint sweep.
/// This is the vector-Jacobian product the loss backward needs; one reverse
/// pass regardless of how many observables feed the loss.
GradientVector adjoint_weighted_grad(const QnnArchitecture& arch,
                                     std::span<const double> params,
                                     std::span<const double> features,
                                     std::span<const Observable> observables,
                                     std::span<const double> weights);

/// One shard's forward pass retained for a weighted reverse sweep. Separating
/// the phases lets the ensemble derive its loss weights from every shard's
/// outputs before any backward work starts, without re-running forwards.
/// The referenced arch/params/features must outlive the tape.
class ShardTape {
  public:
    ShardTape(const QnnArchitecture& arch, std::span<const double> params,
              std::span<const double> features,
              std::span<const Observable> observables);

    std::span<const double> expectations() const { return expectations_; }

    /// Gradient of sum_k weights[k] * <O_k> w.r.t. this shard's parameters.
    GradientVector weighted_grad(std::span<const double> weights) const;

  private:
    const QnnArchitecture* arch_;
    std::span<const double> params_, features_;
    std::span<const Observable> observables_;
    StateVector ket_;
    std::vector<double> expectations_;
};

/// Central differences (f(t+h)-f(t-h))/2h. Test oracle only; h in [1e-7, 1e-2].
GradientVector finite_diff_grad(const QnnArchitecture& arch,
                                std::span<const double> params,
                                std::span<const double> features,
                                const Observable& obs, double h);

} // namespace dqnn
