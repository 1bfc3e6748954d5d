#ifndef KAPRANOV_LINALG_HPP
#define KAPRANOV_LINALG_HPP

#include <vector>

#include <kapranov/series.hpp>

namespace kapranov
{

using Matrix = std::vector<std::vector<GRat>>;
using SeriesMatrix = std::vector<std::vector<TruncSeries>>;

Matrix identity_matrix(int n);
Matrix mat_mul(const Matrix &a, const Matrix &b);
// Gauss-Jordan; throws DomainError when singular.
Matrix mat_inverse(const Matrix &a);
GRat determinant(const Matrix &a);

SeriesMatrix series_mat_mul(const SeriesMatrix &a, const SeriesMatrix &b);
// Inverse of a series matrix with invertible constant part, by a Neumann
// series around it. Every group with variables present must have a finite cap
// unless the non-constant part vanishes there.
SeriesMatrix series_mat_inverse(const SeriesMatrix &a);
Matrix constant_part(const SeriesMatrix &a);

} // namespace kapranov

#endif
