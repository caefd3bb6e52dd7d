#pragma once

// Test-side reference computations. Each works from first principles
// (dictionaries, full enumeration, quadrature) and shares no code path with
// the library routine it checks.

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "fcmac/feasibility.hpp"
#include "fcmac/graph.hpp"
#include "fcmac/prob.hpp"

namespace oracle {

using Tuple = std::vector<std::size_t>;

// Marginal over the axis positions in `keep`, as a dictionary.
std::map<Tuple, double> marginal(const fcmac::JointPMF& p, const std::vector<std::size_t>& keep);

double entropy(const fcmac::JointPMF& p, const std::vector<std::string>& axes);
// H(A,G) + H(B,G) - H(A,B,G) - H(G)
double mutual_information(const fcmac::JointPMF& p, const std::vector<std::string>& a,
                          const std::vector<std::string>& b, const std::vector<std::string>& given = {});

// Every set partition of n items as a restricted growth string.
void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::size_t>&)>& visit);

bool proper(const fcmac::CharGraph& g, const std::vector<std::size_t>& colors);

// Minimum color entropy over proper colorings, by full enumeration.
double min_coloring_entropy(const fcmac::CharGraph& g, const std::vector<double>& weights);

// (1/n) min over proper colorings of the n-fold OR product of
// H(color | U2^n); product graph built by a direct coordinate loop.
double conditional_chromatic_entropy(const fcmac::CharGraph& g, const fcmac::JointPMF& joint, int n);

// Grid search at step 0.01 over kernels p(s | u1) supported on the five
// stable sets of the graph with the single edge {1,3}, for the uniform
// off-diagonal 3x3 joint.
double section5_graph_entropy_grid();

// max over a (1/step + 1)^2 grid of product inputs of I(X1,X2;Y).
double binary_mac_capacity_grid(const fcmac::Kernel& law, double step);

// P(U1 > 0, U2 > 0) for a standard bivariate normal, by quadrature of
// phi(x) Phi(rho x / sqrt(1 - rho^2)) over x > 0.
double positive_quadrant(double rho);

// Minimum MSE of the linear estimate of U1 - U2 from Y = a(U1 - U2) + V
// built from the covariance matrix.
double af_mse_from_covariance(double power, double rho, double sigma2);

// E| |U1 - U2| - est(cell1, cell2) | for the density uniform off the three
// diagonal blocks of [0,1]^2, by midpoint quadrature on an m x m grid.
double abs_diff_distortion_quadrature(std::size_t cells, const std::function<double(std::size_t, std::size_t)>& est,
                                      std::size_t m);

// ---------------------------------------------------------------------------
// Random instances

std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n, double zero_prob = 0.0);
fcmac::JointPMF random_pmf(std::mt19937_64& rng, const std::vector<fcmac::Alphabet>& axes, double zero_prob = 0.0);
fcmac::Kernel random_kernel(std::mt19937_64& rng, const std::vector<fcmac::Alphabet>& from,
                            const std::vector<fcmac::Alphabet>& to, double zero_prob = 0.0);
fcmac::CharGraph random_graph(std::mt19937_64& rng, std::size_t n, double edge_prob);
fcmac::Alphabet labeled(const std::string& name, std::size_t n);
fcmac::SystemSpec random_spec(std::mt19937_64& rng);

}  // namespace oracle
