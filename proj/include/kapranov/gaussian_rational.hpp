#ifndef KAPRANOV_GAUSSIAN_RATIONAL_HPP
#define KAPRANOV_GAUSSIAN_RATIONAL_HPP

#include <ostream>
#include <string>
#include <utility>

#include <gmpxx.h>

namespace kapranov
{

// Exact complex number with rational real and imaginary parts.
class GaussianRational
{
public:
    GaussianRational() = default;
    GaussianRational(long re) : re_(re) {}
    GaussianRational(mpq_class re, mpq_class im = 0) : re_(std::move(re)), im_(std::move(im))
    {
        re_.canonicalize();
        im_.canonicalize();
    }
    GaussianRational(long num, long den) : re_(num, den)
    {
        re_.canonicalize();
    }

    static GaussianRational i()
    {
        return GaussianRational(mpq_class(0), mpq_class(1));
    }

    const mpq_class &re() const
    {
        return re_;
    }
    const mpq_class &im() const
    {
        return im_;
    }

    bool is_zero() const
    {
        return sgn(re_) == 0 && sgn(im_) == 0;
    }
    bool is_real() const
    {
        return sgn(im_) == 0;
    }

    GaussianRational conj() const
    {
        return GaussianRational(re_, -im_);
    }

    GaussianRational &operator+=(const GaussianRational &o)
    {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    GaussianRational &operator-=(const GaussianRational &o)
    {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    GaussianRational &operator*=(const GaussianRational &o)
    {
        if (o.is_real()) {
            re_ *= o.re_;
            im_ *= o.re_;
            return *this;
        }
        mpq_class r = re_ * o.re_ - im_ * o.im_;
        mpq_class m = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(m);
        return *this;
    }
    // Throws std::domain_error on division by zero.
    GaussianRational &operator/=(const GaussianRational &o);

    friend GaussianRational operator+(GaussianRational a, const GaussianRational &b)
    {
        return a += b;
    }
    friend GaussianRational operator-(GaussianRational a, const GaussianRational &b)
    {
        return a -= b;
    }
    friend GaussianRational operator*(GaussianRational a, const GaussianRational &b)
    {
        return a *= b;
    }
    friend GaussianRational operator/(GaussianRational a, const GaussianRational &b)
    {
        return a /= b;
    }
    friend GaussianRational operator-(const GaussianRational &a)
    {
        return GaussianRational(-a.re_, -a.im_);
    }
    friend bool operator==(const GaussianRational &a, const GaussianRational &b)
    {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational &a, const GaussianRational &b)
    {
        return !(a == b);
    }

    // "p/q" or "p/q + r/s*i" style rendering, used in diagnostics only.
    std::string to_string() const;

    friend std::ostream &operator<<(std::ostream &os, const GaussianRational &x)
    {
        return os << x.to_string();
    }

private:
    mpq_class re_{0};
    mpq_class im_{0};
};

using GRat = GaussianRational;

// n! as an exact rational.
mpq_class factorial(unsigned n);

} // namespace kapranov

#endif
