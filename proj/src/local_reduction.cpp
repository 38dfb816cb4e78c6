// Tate's algorithm, following the classical case analysis: locate the
// singular point, then test successive divisibility conditions on the
// a-invariants, translating coordinates between steps. Non-minimal models
// are rescaled by u = ell and the analysis restarts.

#include "ecur/local_reduction.hpp"

#include <algorithm>
#include <stdexcept>

namespace ecur {
namespace {

struct Residues {
    const Integer& p;

    Integer mod(const Integer& a) const
    {
        Integer r;
        mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
        return r;
    }
    Integer inv(const Integer& a) const
    {
        Integer r;
        if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t()) == 0) throw std::logic_error("residue not invertible");
        return r;
    }
};

struct QuadraticInfo {
    bool distinct = false;
    int rational_roots = 0;   // number of roots in F_p when distinct
    Integer double_root = 0;  // when not distinct
};

// a X^2 + b X + c over F_p with a a unit.
QuadraticInfo quadratic(const Integer& a, const Integer& b, const Integer& c, const Integer& p)
{
    Residues R{p};
    QuadraticInfo out;
    if (p == 2) {
        std::vector<Integer> roots;
        for (int x = 0; x < 2; ++x) {
            if (R.mod(a * x * x + b * x + c) == 0) roots.push_back(x);
        }
        out.distinct = R.mod(b) != 0;
        if (out.distinct) out.rational_roots = static_cast<int>(roots.size());
        else out.double_root = roots.at(0);
        return out;
    }
    Integer disc = R.mod(b * b - 4 * a * c);
    out.distinct = disc != 0;
    if (out.distinct) out.rational_roots = legendre(disc, p) == 1 ? 2 : 0;
    else out.double_root = R.mod(-b * R.inv(R.mod(2 * a)));
    return out;
}

using ZPoly = std::vector<Integer>;  // low to high, reduced mod p

void ztrim(ZPoly& f)
{
    while (!f.empty() && f.back() == 0) f.pop_back();
}

ZPoly zmod(ZPoly a, const ZPoly& f, const Residues& R)
{
    ztrim(a);
    std::size_t d = f.size() - 1;
    Integer lead_inv = R.inv(f.back());
    while (a.size() > d) {
        Integer c = R.mod(a.back() * lead_inv);
        std::size_t shift = a.size() - 1 - d;
        for (std::size_t i = 0; i <= d; ++i) a[shift + i] = R.mod(a[shift + i] - c * f[i]);
        ztrim(a);
    }
    return a;
}

ZPoly zmulmod(const ZPoly& a, const ZPoly& b, const ZPoly& f, const Residues& R)
{
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Integer(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    for (auto& c : r) c = R.mod(c);
    return zmod(std::move(r), f, R);
}

// Number of distinct roots in F_p of a monic squarefree polynomial f.
int count_roots(const ZPoly& f, const Residues& R)
{
    ZPoly h{Integer(0), Integer(1)}, acc{Integer(1)};
    Integer e = R.p;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = zmulmod(acc, h, f, R);
        h = zmulmod(h, h, f, R);
        mpz_fdiv_q_2exp(e.get_mpz_t(), e.get_mpz_t(), 1);
    }
    acc.resize(std::max<std::size_t>(acc.size(), 2), Integer(0));
    acc[1] = R.mod(acc[1] - 1);
    ztrim(acc);
    ZPoly a = f, b = acc;
    while (!b.empty()) {
        ZPoly r = zmod(a, b, R);
        a = std::move(b);
        b = std::move(r);
    }
    return static_cast<int>(a.size()) - 1;
}

enum class CubicShape { distinct, double_root, triple_root };

struct CubicInfo {
    CubicShape shape;
    int rational_roots = 0;  // for distinct
    Integer multiple_root = 0;
};

// T^3 + b T^2 + c T + d over F_p.
CubicInfo cubic(const Integer& b, const Integer& c, const Integer& d, const Integer& p)
{
    Residues R{p};
    Integer disc = R.mod(b * b * c * c - 4 * c * c * c - 4 * b * b * b * d - 27 * d * d + 18 * b * c * d);
    CubicInfo out;
    if (disc != 0) {
        out.shape = CubicShape::distinct;
        out.rational_roots = count_roots({R.mod(d), R.mod(c), R.mod(b), Integer(1)}, R);
        return out;
    }
    if (p <= 3) {
        for (unsigned long t = 0; t < p.get_ui(); ++t) {
            Integer T(t);
            if (R.mod(T * T * T + b * T * T + c * T + d) != 0) continue;
            if (R.mod(3 * T * T + 2 * b * T + c) != 0) continue;
            out.multiple_root = T;
            out.shape = R.mod(3 * T + b) != 0 ? CubicShape::double_root : CubicShape::triple_root;
            return out;
        }
        throw std::logic_error("cubic with zero discriminant has no multiple root");
    }
    Integer w = R.mod(b * b - 3 * c);
    if (w == 0) {
        out.shape = CubicShape::triple_root;
        out.multiple_root = R.mod(-b * R.inv(Integer(3)));
    } else {
        out.shape = CubicShape::double_root;
        out.multiple_root = R.mod((9 * d - b * c) * R.inv(R.mod(2 * w)));
    }
    return out;
}

class TateRun {
public:
    TateRun(const ModelPtr& model, const Prime& ell) : ell_(ell), p_(ell.value()), R_{p_}, original_(model), cur_(model) {}

    ReductionData run();
    const ModelPtr& current() const { return cur_; }
    const IsomorphismData& iso() const { return iso_; }
    bool rescaled() const { return rescaled_; }
    // Net exponent e with u = ell^e over all rescalings.
    long scale_exponent() const { return scale_exp_; }

private:
    Valuation v(const Rational& q) const { return vp(q, ell_); }
    bool div(const Rational& q, long k) const { return v(q) >= Valuation(k); }
    Integer res(const Rational& q) const { return mod_reduce(q, p_); }
    Rational pk(long k) const
    {
        Integer r;
        mpz_pow_ui(r.get_mpz_t(), p_.get_mpz_t(), static_cast<unsigned long>(k));
        return Rational(r);
    }
    void apply(const IsomorphismData& step)
    {
        if (step.is_identity()) return;
        cur_ = cur_->transform(step);
        iso_ = iso_.then(step);
    }
    void require(bool cond, const char* what) const
    {
        if (!cond) throw std::logic_error(std::string("Tate's algorithm invariant failed: ") + what);
    }
    std::pair<Integer, Integer> singular_point() const;
    ReductionData finish(Kodaira k, unsigned c, ReductionKind kind, long n);

    const Prime& ell_;
    const Integer& p_;
    Residues R_;
    ModelPtr original_;
    ModelPtr cur_;
    IsomorphismData iso_;
    bool rescaled_ = false;
    long scale_exp_ = 0;
};

std::pair<Integer, Integer> TateRun::singular_point() const
{
    const auto& m = *cur_;
    if (p_ <= 3) {
        unsigned long p = p_.get_ui();
        Integer a1 = res(m.a1()), a2 = res(m.a2()), a3 = res(m.a3()), a4 = res(m.a4()), a6 = res(m.a6());
        for (unsigned long xi = 0; xi < p; ++xi) {
            for (unsigned long yi = 0; yi < p; ++yi) {
                Integer x(xi), y(yi);
                Integer f = y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6;
                Integer fx = a1 * y - 3 * x * x - 2 * a2 * x - a4;
                Integer fy = 2 * y + a1 * x + a3;
                if (R_.mod(f) == 0 && R_.mod(fx) == 0 && R_.mod(fy) == 0) return {x, y};
            }
        }
        throw std::logic_error("no singular point found on a singular reduction");
    }
    Integer b2 = res(m.b2()), c4 = res(m.c4()), c6 = res(m.c6());
    Integer x0 = c4 == 0 ? R_.mod(-b2 * R_.inv(Integer(12)))
                         : R_.mod(-(c6 + b2 * c4) * R_.inv(R_.mod(12 * c4)));
    Integer y0 = R_.mod(-(res(m.a1()) * x0 + res(m.a3())) * R_.inv(Integer(2)));
    return {x0, y0};
}

ReductionData TateRun::finish(Kodaira k, unsigned c, ReductionKind kind, long n)
{
    ReductionData d;
    d.prime = p_;
    d.kodaira = k;
    d.tamagawa = c;
    d.kind = kind;
    d.v_disc_min = n;
    d.v_c4 = v(cur_->c4());
    d.v_j = v(cur_->j());
    d.potential = d.v_j < 0 ? PotentialReduction::multiplicative : PotentialReduction::good;
    return d;
}

ReductionData TateRun::run()
{
    using F = Kodaira::Family;
    // Make the model ell-integral.
    long k0 = 0;
    static constexpr int weights[5] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
        const Rational& a = cur_->ainvs()[i];
        if (a.is_zero()) continue;
        long va = v(a).value();
        if (va < 0) k0 = std::max(k0, (-va + weights[i] - 1) / weights[i]);
    }
    if (k0 > 0) {
        apply({Rational(1) / pk(k0), 0, 0, 0});
        rescaled_ = true;
        scale_exp_ = -k0;
    }

    for (int pass = 0;; ++pass) {
        if (pass > 64) throw std::logic_error("Tate's algorithm did not terminate");
        long n = v(cur_->disc()).value();
        if (n == 0) return finish({F::I, 0}, 1, ReductionKind::good, 0);

        auto [x0, y0] = singular_point();
        apply({1, Rational(x0), 0, Rational(y0)});
        require(div(cur_->a3(), 1) && div(cur_->a4(), 1) && div(cur_->a6(), 1), "singular point at origin");

        if (!div(cur_->b2(), 1)) {
            auto q = quadratic(Integer(1), res(cur_->a1()), res(-cur_->a2()), p_);
            bool split = q.rational_roots == 2;
            unsigned c = split ? static_cast<unsigned>(n) : (n % 2 ? 1u : 2u);
            return finish({F::I, static_cast<unsigned>(n)}, c,
                          split ? ReductionKind::split_multiplicative : ReductionKind::nonsplit_multiplicative, n);
        }
        if (!div(cur_->a6(), 2)) return finish({F::II, 0}, 1, ReductionKind::additive, n);
        if (!div(cur_->b8(), 3)) return finish({F::III, 0}, 2, ReductionKind::additive, n);
        if (!div(cur_->b6(), 3)) {
            auto q = quadratic(Integer(1), res(cur_->a3() / pk(1)), res(-cur_->a6() / pk(2)), p_);
            return finish({F::IV, 0}, q.rational_roots == 2 ? 3 : 1, ReductionKind::additive, n);
        }

        // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
        {
            Integer s, t;
            if (p_ == 2) {
                s = res(cur_->a2());
                t = 2 * res(cur_->a6() / pk(2));
            } else {
                Integer half = R_.inv(Integer(2));
                s = R_.mod(-res(cur_->a1()) * half);
                Integer p3 = pk(3).num();
                Integer inv2_p3;
                mpz_invert(inv2_p3.get_mpz_t(), Integer(2).get_mpz_t(), p3.get_mpz_t());
                t = -mod_reduce(cur_->a3(), p3) * inv2_p3;
                mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), p3.get_mpz_t());
            }
            apply({1, 0, Rational(s), Rational(t)});
        }
        require(div(cur_->a1(), 1) && div(cur_->a2(), 1) && div(cur_->a3(), 2) && div(cur_->a4(), 2) &&
                    div(cur_->a6(), 3),
                "step 6 divisibility");

        auto P = cubic(res(cur_->a2() / pk(1)), res(cur_->a4() / pk(2)), res(cur_->a6() / pk(3)), p_);
        if (P.shape == CubicShape::distinct) {
            return finish({F::I_star, 0}, 1 + static_cast<unsigned>(P.rational_roots), ReductionKind::additive, n);
        }

        apply({1, pk(1) * Rational(P.multiple_root), 0, 0});

        if (P.shape == CubicShape::double_root) {
            require(v(cur_->a2()) == Valuation(1) && div(cur_->a4(), 3) && div(cur_->a6(), 4), "double root at origin");
            Rational mx = pk(2), my = pk(2);
            for (unsigned m = 1;; ++m) {
                if (static_cast<long>(m) > n) throw std::logic_error("I_m* subprocedure did not terminate");
                QuadraticInfo q;
                if (m % 2 == 1) {
                    q = quadratic(Integer(1), res(cur_->a3() / my), res(-cur_->a6() / (my * my)), p_);
                    if (!q.distinct) apply({1, 0, 0, my * Rational(q.double_root)});
                } else {
                    q = quadratic(res(cur_->a2() / pk(1)), res(cur_->a4() / (pk(1) * mx)),
                                  res(cur_->a6() / (pk(1) * mx * mx)), p_);
                    if (!q.distinct) apply({1, mx * Rational(q.double_root), 0, 0});
                }
                if (q.distinct) {
                    return finish({F::I_star, m}, q.rational_roots == 2 ? 4 : 2, ReductionKind::additive, n);
                }
                if (m % 2 == 0) {
                    mx *= pk(1);
                    my *= pk(1);
                }
            }
        }

        require(div(cur_->a2(), 2) && div(cur_->a4(), 3) && div(cur_->a6(), 4), "triple root at origin");
        auto q = quadratic(Integer(1), res(cur_->a3() / pk(2)), res(-cur_->a6() / pk(4)), p_);
        if (q.distinct) return finish({F::IV_star, 0}, q.rational_roots == 2 ? 3 : 1, ReductionKind::additive, n);
        apply({1, 0, 0, pk(2) * Rational(q.double_root)});
        require(div(cur_->a3(), 3) && div(cur_->a6(), 5), "IV* double root");
        if (!div(cur_->a4(), 4)) return finish({F::III_star, 0}, 2, ReductionKind::additive, n);
        if (!div(cur_->a6(), 6)) return finish({F::II_star, 0}, 1, ReductionKind::additive, n);

        apply({pk(1), 0, 0, 0});
        rescaled_ = true;
        ++scale_exp_;
    }
}

}  // namespace

std::string Kodaira::str() const
{
    switch (family) {
    case Family::I: return "I" + std::to_string(n);
    case Family::I_star: return "I" + std::to_string(n) + "*";
    case Family::II: return "II";
    case Family::III: return "III";
    case Family::IV: return "IV";
    case Family::IV_star: return "IV*";
    case Family::III_star: return "III*";
    case Family::II_star: return "II*";
    }
    return "?";
}

Kodaira Kodaira::parse(const std::string& s)
{
    for (auto f : {Family::II, Family::III, Family::IV, Family::IV_star, Family::III_star, Family::II_star}) {
        Kodaira k{f, 0};
        if (k.str() == s) return k;
    }
    if (s.size() >= 2 && s[0] == 'I') {
        bool star = s.back() == '*';
        std::string digits = s.substr(1, s.size() - 1 - (star ? 1 : 0));
        if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit)) {
            return {star ? Family::I_star : Family::I, static_cast<unsigned>(std::stoul(digits))};
        }
    }
    throw std::invalid_argument("unknown Kodaira symbol '" + s + "'");
}

std::string to_string(ReductionKind k)
{
    switch (k) {
    case ReductionKind::good: return "good";
    case ReductionKind::split_multiplicative: return "split-mult";
    case ReductionKind::nonsplit_multiplicative: return "nonsplit-mult";
    case ReductionKind::additive: return "additive";
    }
    return "?";
}

std::string to_string(PotentialReduction k) { return k == PotentialReduction::good ? "good" : "multiplicative"; }

std::pair<ModelPtr, IsomorphismData> minimal_model_at(const ModelPtr& model, const Prime& ell)
{
    TateRun run(model, ell);
    run.run();
    if (!run.rescaled()) return {model, IsomorphismData::identity()};
    // Prefer a pure rescaling of the input when it is already ell-integral.
    long e = run.scale_exponent();
    Integer pe;
    mpz_pow_ui(pe.get_mpz_t(), ell.value().get_mpz_t(), static_cast<unsigned long>(e < 0 ? -e : e));
    IsomorphismData scale{e < 0 ? Rational(1) / Rational(pe) : Rational(pe), 0, 0, 0};
    ModelPtr scaled = model->transform(scale);
    if (scaled->is_integral_at(ell) && vp(scaled->disc(), ell) == vp(run.current()->disc(), ell)) return {scaled, scale};
    return {run.current(), run.iso()};
}

ReductionData tate_algorithm(const ModelPtr& model, const Prime& ell)
{
    TateRun run(model, ell);
    return run.run();
}

std::vector<ReductionData> bad_primes(const ModelPtr& model, const FactorizationBudget& budget)
{
    auto [integral, iso] = model->integral_model();
    Factorization f = factorize(integral->disc().num(), budget);
    if (!f.complete) {
        throw IncompleteFactorization("discriminant " + integral->disc().str() +
                                          " not completely factored; unfactored cofactor " + f.cofactor.get_str(),
                                      f.cofactor);
    }
    std::vector<ReductionData> out;
    for (const auto& pp : f.factors) {
        ReductionData d = tate_algorithm(model, Prime(pp.prime));
        if (d.v_disc_min > 0) out.push_back(std::move(d));
    }
    return out;
}

std::pair<ModelPtr, IsomorphismData> global_minimal_model(const ModelPtr& model, const FactorizationBudget& budget)
{
    auto [integral, scale] = model->integral_model();
    Factorization f = factorize(integral->disc().num(), budget);
    if (!f.complete) {
        throw IncompleteFactorization("discriminant not completely factored", f.cofactor);
    }
    ModelPtr cur = model;
    IsomorphismData iso;
    for (const auto& pp : f.factors) {
        auto [next, step] = minimal_model_at(cur, Prime(pp.prime));
        cur = next;
        iso = iso.then(step);
    }
    return {cur, iso};
}

}  // namespace ecur
