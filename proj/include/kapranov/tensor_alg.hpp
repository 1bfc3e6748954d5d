#ifndef KAPRANOV_TENSOR_ALG_HPP
#define KAPRANOV_TENSOR_ALG_HPP

#include <map>
#include <span>
#include <vector>

#include <kapranov/series.hpp>

namespace kapranov
{

// A word of basis covector indices.
using Word = std::vector<int>;

// Formal linear combination of words: an element of the tensor coalgebra.
class TensorWord
{
public:
    using Terms = std::map<Word, GRat>;

    TensorWord() = default;
    static TensorWord unit();
    static TensorWord word(Word w, const GRat &c = GRat(1));

    const Terms &terms() const
    {
        return terms_;
    }
    bool is_zero() const
    {
        return terms_.empty();
    }
    GRat coeff(const Word &w) const;
    void add(const Word &w, const GRat &c);

    TensorWord &operator+=(const TensorWord &o);
    TensorWord &operator-=(const TensorWord &o);
    TensorWord &operator*=(const GRat &c);
    friend TensorWord operator+(TensorWord a, const TensorWord &b)
    {
        return a += b;
    }
    friend TensorWord operator-(TensorWord a, const TensorWord &b)
    {
        return a -= b;
    }
    friend TensorWord operator*(TensorWord a, const GRat &c)
    {
        return a *= c;
    }
    friend bool operator==(const TensorWord &, const TensorWord &) = default;

    std::string to_string() const;

private:
    Terms terms_;
};

TensorWord shuffle(const TensorWord &a, const TensorWord &b);

// Symmetric algebra elements are series in the fiber variables: u_i stands
// for the i-th basis covector, a monomial exponent vector is the canonical
// (sorted) multiset of indices. Coefficients may depend on base variables.
using SymPoly = TruncSeries;

// Empty symmetric polynomial in dim generators with degree cap.
SymPoly sym_poly(int dim, int cap);
Monomial multiset_of(std::span<const int> word, const VarSpec &spec);
Word sorted_word(const Monomial &m, const VarSpec &spec);
// prod_i m_i! over the fiber exponents.
mpq_class multiset_factorial(const Monomial &m, const VarSpec &spec);

// Coefficients must be constant (no base variables).
TensorWord sym_include(const SymPoly &p);
SymPoly sym_project(const TensorWord &w, int dim, int cap);

// pi applied to a tensor with series coefficients: sum_I T_I u^I / k! where
// every T_I lives over the base part of full. Words may have mixed lengths.
SymPoly sym_project_series(const std::map<Word, TruncSeries> &t, const VarSpec &full, const Caps &caps);

// An element of Hom(V*, S V*) given by the images of the generators u_j.
// Images need not be homogeneous; degree() reports the common degree when
// they are.
class HomTensor
{
public:
    HomTensor() = default;
    explicit HomTensor(std::vector<TruncSeries> images);
    static HomTensor zero(const VarSpec &spec, const Caps &caps);

    int dim() const
    {
        return static_cast<int>(images_.size());
    }
    const VarSpec &spec() const
    {
        return images_.at(0).spec();
    }
    const std::vector<TruncSeries> &images() const
    {
        return images_;
    }
    const TruncSeries &image(int j) const
    {
        return images_.at(j);
    }
    // Common fiber degree of all stored terms, -1 when mixed or empty.
    int degree() const;
    bool is_zero() const;

    // Coefficient of the multiset in the image of u_j, over the base spec.
    TruncSeries entry(int j, const Monomial &multiset) const;
    // Piece of fiber degree d.
    HomTensor homogeneous_part(int d) const;

    HomTensor &operator+=(const HomTensor &o);
    HomTensor &operator-=(const HomTensor &o);
    friend HomTensor operator+(HomTensor a, const HomTensor &b)
    {
        return a += b;
    }
    friend HomTensor operator-(HomTensor a, const HomTensor &b)
    {
        return a -= b;
    }

private:
    std::vector<TruncSeries> images_;
};

// Applies the unique derivation sending u_j to image(j): sum_j R(u_j) dx/du_j.
// The result is known to fiber order min(cap(x) - 1 + v, cap(R)) where v is
// the least fiber degree of the images, cut at fiber_cap.
TruncSeries derivation_extend(const HomTensor &r, const TruncSeries &x, int fiber_cap = kExact);

// Bracket of derivations, again determined by images of generators.
HomTensor derivation_bracket(const HomTensor &x, const HomTensor &y, int fiber_cap = kExact);

} // namespace kapranov

#endif
