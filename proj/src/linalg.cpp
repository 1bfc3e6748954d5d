#include <kapranov/linalg.hpp>

namespace kapranov
{

Matrix identity_matrix(int n)
{
    Matrix m(n, std::vector<GRat>(n));
    for (int i = 0; i < n; ++i) {
        m[i][i] = GRat(1);
    }
    return m;
}

Matrix mat_mul(const Matrix &a, const Matrix &b)
{
    const std::size_t n = a.size();
    const std::size_t k = b.size();
    const std::size_t m = k ? b[0].size() : 0;
    Matrix c(n, std::vector<GRat>(m));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != k) {
            throw ShapeError("mat_mul: inner dimensions differ");
        }
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l].is_zero()) {
                continue;
            }
            for (std::size_t j = 0; j < m; ++j) {
                c[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    return c;
}

namespace
{

// Row-reduces a copy of a; returns the inverse and the determinant.
std::pair<Matrix, GRat> gauss_jordan(const Matrix &a)
{
    const int n = static_cast<int>(a.size());
    Matrix m = a;
    Matrix inv = identity_matrix(n);
    GRat det(1);
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r) {
            if (!m[r][col].is_zero()) {
                piv = r;
                break;
            }
        }
        if (piv < 0) {
            return {{}, GRat(0)};
        }
        if (piv != col) {
            std::swap(m[piv], m[col]);
            std::swap(inv[piv], inv[col]);
            det = -det;
        }
        const GRat p = m[col][col];
        det *= p;
        const GRat pinv = GRat(1) / p;
        for (int j = 0; j < n; ++j) {
            m[col][j] *= pinv;
            inv[col][j] *= pinv;
        }
        for (int r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) {
                continue;
            }
            const GRat f = m[r][col];
            for (int j = 0; j < n; ++j) {
                m[r][j] -= f * m[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return {inv, det};
}

} // namespace

Matrix mat_inverse(const Matrix &a)
{
    for (const auto &row : a) {
        if (row.size() != a.size()) {
            throw ShapeError("mat_inverse: matrix is not square");
        }
    }
    auto [inv, det] = gauss_jordan(a);
    if (det.is_zero()) {
        throw DomainError("mat_inverse: singular matrix");
    }
    return inv;
}

GRat determinant(const Matrix &a)
{
    return gauss_jordan(a).second;
}

SeriesMatrix series_mat_mul(const SeriesMatrix &a, const SeriesMatrix &b)
{
    const std::size_t n = a.size();
    const std::size_t k = b.size();
    const std::size_t m = k ? b[0].size() : 0;
    SeriesMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        c[i].reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            TruncSeries acc = a[i][0] * b[0][j];
            for (std::size_t l = 1; l < k; ++l) {
                acc += a[i][l] * b[l][j];
            }
            c[i].push_back(std::move(acc));
        }
    }
    return c;
}

Matrix constant_part(const SeriesMatrix &a)
{
    Matrix m(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (const auto &x : a[i]) {
            m[i].push_back(x.constant_term());
        }
    }
    return m;
}

SeriesMatrix series_mat_inverse(const SeriesMatrix &a)
{
    const int n = static_cast<int>(a.size());
    if (n == 0) {
        return {};
    }
    const Matrix a0inv = mat_inverse(constant_part(a));
    const VarSpec &spec = a[0][0].spec();
    Caps caps = a[0][0].caps();
    for (const auto &row : a) {
        for (const auto &x : row) {
            caps = min(caps, x.caps());
        }
    }
    // a = a0 (1 + N) with N = a0^{-1} (a - a0) nilpotent modulo caps.
    SeriesMatrix inv0(n), nil(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            inv0[i].push_back(TruncSeries::constant(spec, a0inv[i][j], caps));
        }
    }
    SeriesMatrix rest(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            TruncSeries x = a[i][j].truncated(caps);
            x.add_term(Monomial{}, -x.constant_term());
            rest[i].push_back(std::move(x));
        }
    }
    nil = series_mat_mul(inv0, rest);
    for (auto &row : nil) {
        for (auto &x : row) {
            x *= GRat(-1);
            if (!nilpotent_mod_caps(x)) {
                throw DomainError("series_mat_inverse: not nilpotent modulo the caps");
            }
        }
    }
    // sum_k (-N)^k a0^{-1}
    SeriesMatrix term = inv0;
    SeriesMatrix out = inv0;
    for (;;) {
        term = series_mat_mul(nil, term);
        bool zero = true;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                term[i][j] = term[i][j].truncated(caps);
                if (!term[i][j].is_zero()) {
                    zero = false;
                }
                out[i][j] += term[i][j];
            }
        }
        if (zero) {
            break;
        }
    }
    for (auto &row : out) {
        for (auto &x : row) {
            x = x.truncated(caps);
        }
    }
    return out;
}

} // namespace kapranov
