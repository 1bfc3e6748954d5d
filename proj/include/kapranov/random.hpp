#ifndef KAPRANOV_RANDOM_HPP
#define KAPRANOV_RANDOM_HPP

#include <random>

#include <kapranov/dolbeault.hpp>
#include <kapranov/formal_conn.hpp>
#include <kapranov/series.hpp>

namespace kapranov
{

using Rng = std::mt19937_64;

// Small Gaussian rationals with numerators in [-5, 5] and denominators in [1, 4].
GRat random_grat(Rng &rng, bool complex = true);

// Sparse series with at most n_terms terms of total degree <= max_deg.
TruncSeries random_series(Rng &rng, const VarSpec &spec, const Caps &caps, int max_deg, int n_terms,
                          bool allow_constant = true);

// Random jet of order r. Linear part is the identity when in_j, otherwise a
// random invertible matrix. Higher coefficients are sparse; with a spec that
// carries base variables they depend polynomially on them (degree <= 1).
AutoJet random_autojet(Rng &rng, int dim, int order, bool in_j, const VarSpec &spec = {});

// Flat torsion-free connection of order r: the Euclidean connection pushed
// forward along a random jet in J of order r + 1.
ConnectionJet random_flat_connection(Rng &rng, int dim, int order, const VarSpec &spec = {});

// (z, zbar)-family over full(dim) of flat torsion-free connections of order
// fiber_cap + 1: the Euclidean connection pushed along a J-jet whose
// coefficients depend on every zbar_j.
ConnectionJet random_section_family(Rng &rng, int dim, int fiber_cap);

// Function, dzbar_0 and dwbar_0 parts, each a sparse polynomial of total
// degree <= deg in the bi-chart variables.
BiChartForm random_bi_form(Rng &rng, int dim, int deg);

// Holomorphic Christoffel symbols of degree <= 2, generally neither
// symmetric nor flat.
ChartConnection random_holomorphic_connection(Rng &rng, int dim);

} // namespace kapranov

#endif
