#pragma once

#include <vector>

#include "core/numerics.hpp"
#include "core/txchain.hpp"
#include "core/vdecoder.hpp"

namespace pnc {

// Fading prior shared by all estimators: independent per-user Gauss-Markov
// processes with memory alpha and stationary variances (var_a, var_b).
struct ChannelPrior {
  double alpha = 0.99;
  double var_a = 1.0;
  double var_b = 1.0;
};

struct ChannelEstimate {
  std::vector<cplx> h_a, h_b;  // length total_len
};

// First and second moments of one position's pair table. Conjugate-side
// moments follow from these (E[x^*] = conj(E[x]), E[x_B^* x_A] = conj(cross)).
struct PairMoments {
  cplx ex_a{}, ex_b{};
  double e2_a = 0.0, e2_b = 0.0;
  cplx cross{};  // E[x_A^* x_B]
};

PairMoments pair_moments(const PairAPP& app);

// Block-wise MMSE estimate from the two orthogonal pilots of each block,
// held constant across the block.
ChannelEstimate mmse_pilot_init(const std::vector<cplx>& y,
                                const FrameLayout& layout,
                                const ChannelPrior& prior, double n0);

// Local observation message for the joint channel pair h_i = (h_A,i, h_B,i):
// expectation of -|y - h^T x|^2 / N0 over the symbol-pair posterior, kept in
// canonical form so rank-deficient precisions (pilots) stay representable.
GaussianBelief em_message(const PairAPP& app, cplx y, double n0);

// Scalar observation message for one user with the other user's current
// estimate treated as known interference.
GaussianBelief sage_message(const PairAPP& app, cplx y, double n0, int user,
                            cplx h_other);

// One step of the Gauss-Markov chain in information form. `predict` maps a
// belief on h_{i-1} to h_i, `retrodict` maps a belief on h_{i+1} back to h_i.
// Valid for singular inputs; alpha = 1 passes the belief through unchanged.
GaussianBelief gm_predict(const GaussianBelief& in, const ChannelPrior& prior);
GaussianBelief gm_retrodict(const GaussianBelief& in, const ChannelPrior& prior);
GaussianBelief gm_predict1(const GaussianBelief& in, double alpha, double var);
GaussianBelief gm_retrodict1(const GaussianBelief& in, double alpha, double var);

// Forward/backward sweeps over the chain. obs[i] is the local observation
// message at position i (dim must match, 2 for joint, 1 for per-user).
// forward[0] carries the stationary prior; backward[L-1] is flat.
std::vector<GaussianBelief> forward_sweep(const std::vector<GaussianBelief>& obs,
                                          const ChannelPrior& prior);
std::vector<GaussianBelief> backward_sweep(const std::vector<GaussianBelief>& obs,
                                           const ChannelPrior& prior);
std::vector<GaussianBelief> forward_sweep1(const std::vector<GaussianBelief>& obs,
                                           double alpha, double var);
std::vector<GaussianBelief> backward_sweep1(const std::vector<GaussianBelief>& obs,
                                            double alpha, double var);

// Posterior mean per position from forward * observation * backward.
ChannelEstimate combine_estimate(const std::vector<GaussianBelief>& fwd,
                                 const std::vector<GaussianBelief>& obs,
                                 const std::vector<GaussianBelief>& bwd);

// One joint re-estimation pass: observation messages from the pair tables,
// then a full smoothing sweep.
ChannelEstimate em_update(const std::vector<cplx>& y,
                          const std::vector<PairAPP>& pair_apps,
                          const ChannelPrior& prior, double n0);

// One per-user re-estimation pass (user 0 = A, 1 = B) holding the other
// user's estimate fixed. Returns the updated track for that user only.
std::vector<cplx> sage_update(const std::vector<cplx>& y,
                              const std::vector<PairAPP>& pair_apps,
                              const ChannelPrior& prior, double n0, int user,
                              const std::vector<cplx>& h_other);

}  // namespace pnc
