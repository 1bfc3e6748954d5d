#include <kapranov/gaussian_rational.hpp>

#include <stdexcept>

namespace kapranov
{

GaussianRational &GaussianRational::operator/=(const GaussianRational &o)
{
    if (o.is_zero()) {
        throw std::domain_error("GaussianRational: division by zero");
    }
    if (o.is_real()) {
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    const mpq_class norm = o.re_ * o.re_ + o.im_ * o.im_;
    mpq_class r = (re_ * o.re_ + im_ * o.im_) / norm;
    mpq_class m = (im_ * o.re_ - re_ * o.im_) / norm;
    re_ = std::move(r);
    im_ = std::move(m);
    return *this;
}

std::string GaussianRational::to_string() const
{
    if (is_real()) {
        return re_.get_str();
    }
    if (sgn(re_) == 0) {
        return im_.get_str() + "i";
    }
    return "(" + re_.get_str() + (sgn(im_) < 0 ? "" : "+") + im_.get_str() + "i)";
}

mpq_class factorial(unsigned n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return mpq_class(f);
}

} // namespace kapranov
