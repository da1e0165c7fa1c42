#include "crossflow/diagnostics.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace crossflow {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

inline double floored_log(double x, double floor) {
    return std::log(x < floor ? floor : x);
}
} // namespace

double entropy_2d(const Field2D& f, const EntropyConfig& cfg) {
    int n = f.n();
    double h = f.h();
    KahanSum sum;
    for (int j = 0; j < n; ++j) {
        double y = (j + 0.5) * h;
        for (int i = 0; i < n; ++i) {
            double x = (i + 0.5) * h;
            double r = f.r.at(i, j);
            double b = f.b.at(i, j);
            double xi = 1.0 - r - b;
            double cell = cfg.epsilon * (r * (floored_log(r, cfg.log_floor) - 1.0)
                                         + b * (floored_log(b, cfg.log_floor) - 1.0)
                                         + 0.5 * xi * (floored_log(xi, cfg.log_floor) - 1.0))
                        + r * (-x) + b * (-y);
            sum.add(cell);
        }
    }
    return sum.value() * h * h;
}

double entropy_potential_u(double r, double rho, double x, const EntropyConfig& cfg) {
    return cfg.epsilon * floored_log(r, cfg.log_floor)
         - 0.5 * cfg.epsilon * floored_log(1.0 - rho, cfg.log_floor) - x;
}

double entropy_potential_v(double b, double rho, double y, const EntropyConfig& cfg) {
    return cfg.epsilon * floored_log(b, cfg.log_floor)
         - 0.5 * cfg.epsilon * floored_log(1.0 - rho, cfg.log_floor) - y;
}

EntropyVariables entropy_variables(const Field2D& f, const EntropyConfig& cfg) {
    int n = f.n();
    double h = f.h();
    EntropyVariables ev;
    ev.u = Array2D(n, n);
    ev.v = Array2D(n, n);
    for (int j = 0; j < n; ++j) {
        double y = (j + 0.5) * h;
        for (int i = 0; i < n; ++i) {
            double x = (i + 0.5) * h;
            double r = f.r.at(i, j);
            double b = f.b.at(i, j);
            double rho = r + b;
            if (r < cfg.log_floor || b < cfg.log_floor || 1.0 - rho < cfg.log_floor)
                ++ev.floored_cells;
            ev.u.at(i, j) = entropy_potential_u(r, rho, x, cfg);
            ev.v.at(i, j) = entropy_potential_v(b, rho, y, cfg);
        }
    }
    return ev;
}

GrowthMonitor monitor_entropy_growth(const std::vector<double>& t,
                                     const std::vector<double>& value) {
    if (t.size() != value.size() || t.size() < 2)
        throw std::invalid_argument("growth monitor needs >= 2 aligned samples");
    size_t n = t.size();
    KahanSum st, sv, stt, stv;
    for (size_t k = 0; k < n; ++k) {
        st.add(t[k]);
        sv.add(value[k]);
        stt.add(t[k] * t[k]);
        stv.add(t[k] * value[k]);
    }
    double den = n * stt.value() - st.value() * st.value();
    GrowthMonitor gm;
    gm.slope = den != 0.0 ? (n * stv.value() - st.value() * sv.value()) / den : 0.0;
    gm.max_step_increase = -std::numeric_limits<double>::infinity();
    for (size_t k = 1; k < n; ++k)
        gm.max_step_increase = std::max(gm.max_step_increase, value[k] - value[k - 1]);
    return gm;
}

double entropy_1d(const XiEtaField& f, const EntropyConfig& cfg) {
    int n = f.n();
    double h = f.h();
    KahanSum sum;
    for (int i = 0; i < n; ++i) {
        double xi = f.xi[i];
        double eta = f.eta[i];
        double cell = eta * eta
                    - 2.0 * (xi * (floored_log(xi, cfg.log_floor) - 1.0) + 1.0)
                    + 2.0 * (1.0 - xi) * (1.0 - xi);
        sum.add(cell);
    }
    return 0.5 * h * sum.value();
}

double lyapunov_relative(const XiEtaField& f, double xi_inf, double eta_inf,
                         const EntropyConfig& cfg) {
    if (!(xi_inf > 0.0))
        throw std::invalid_argument("lyapunov_relative requires xi_inf > 0");
    int n = f.n();
    double h = f.h();
    KahanSum sum;
    for (int i = 0; i < n; ++i) {
        double xi = f.xi[i];
        double eta = f.eta[i];
        double s = xi / xi_inf;
        double de = eta - eta_inf;
        double dx = xi - xi_inf;
        double cell = de * de + 2.0 * dx * dx
                    - 2.0 * xi_inf * (s * (floored_log(s, cfg.log_floor) - 1.0) + 1.0);
        sum.add(cell);
    }
    KahanSum grad;
    for (int i = 0; i < n; ++i) {
        double d = (f.xi[(i + 1) % n] - f.xi[i]) / h;
        grad.add(d * d);
    }
    return 0.5 * h * (sum.value() + cfg.alpha_lyap * cfg.epsilon * cfg.epsilon * grad.value());
}

double segregation_index(const std::vector<std::uint8_t>& cells, int n) {
    long occupied_pairs = 0;
    long same_pairs = 0;
    auto look = [&](int i, int j) { return cells[static_cast<size_t>(j) * n + i]; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            std::uint8_t c = look(i, j);
            if (c == 0) continue;
            std::uint8_t right = look((i + 1) % n, j);
            std::uint8_t up = look(i, (j + 1) % n);
            if (right != 0) {
                ++occupied_pairs;
                if (right == c) ++same_pairs;
            }
            if (up != 0) {
                ++occupied_pairs;
                if (up == c) ++same_pairs;
            }
        }
    }
    if (occupied_pairs == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(same_pairs) / static_cast<double>(occupied_pairs);
}

double diagonal_anisotropy(const Array2D& field) {
    int n = field.nx;
    // Power on the (m,m) family equals the 1D spectrum of the projection
    // onto lines i+j = const; the (m,n-m) family that of i-j = const.
    std::vector<double> gp(n, 0.0), gm(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double v = field.at(i, j);
            gp[(i + j) % n] += v;
            gm[(i - j + n) % n] += v;
        }
    double p_plus = 0.0, p_minus = 0.0;
    for (int m = 1; m < n; ++m) {
        if (2 * m == n) continue; // the Nyquist diagonal lies in both families
        std::complex<double> fp(0.0, 0.0), fm(0.0, 0.0);
        for (int s = 0; s < n; ++s) {
            double ang = -2.0 * kPi * m * s / n;
            std::complex<double> w(std::cos(ang), std::sin(ang));
            fp += gp[s] * w;
            fm += gm[s] * w;
        }
        p_plus += std::norm(fp);
        p_minus += std::norm(fm);
    }
    if (p_plus < 1e-14 && p_minus < 1e-14) return 0.0;
    return (p_minus - p_plus) / (p_minus + p_plus);
}

std::complex<double> diagonal_mode_coefficient(const Array2D& field, int m, int family) {
    const int n = field.nx;
    std::vector<double> g(n, 0.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            g[(family >= 0 ? (i + j) % n : (i - j + n) % n)] += field.at(i, j);
    std::complex<double> acc(0.0, 0.0);
    for (int s = 0; s < n; ++s) {
        double ang = -2.0 * kPi * m * s / n;
        acc += g[s] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return acc;
}

double mass_2d(const Array2D& a, double h) {
    return kahan_total(a.v) * h * h;
}

double mass_1d(const std::vector<double>& v, double h) {
    return kahan_total(v) * h;
}

double perturbation_l2_2d(const Field2D& f, double r_inf, double b_inf) {
    int n = f.n();
    double h = f.h();
    KahanSum sum;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double dr = f.r.at(i, j) - r_inf;
            double db = f.b.at(i, j) - b_inf;
            sum.add(dr * dr + db * db);
        }
    return std::sqrt(sum.value() * h * h);
}

double perturbation_l2_1d(const Field1D& f, double r_inf, double b_inf) {
    int n = f.n();
    double h = f.h();
    KahanSum sum;
    for (int i = 0; i < n; ++i) {
        double dr = f.r[i] - r_inf;
        double db = f.b[i] - b_inf;
        sum.add(dr * dr + db * db);
    }
    return std::sqrt(sum.value() * h);
}

double mode_amplitude(const std::vector<double>& f, double mean, int m) {
    int n = static_cast<int>(f.size());
    double h = 1.0 / n;
    std::complex<double> acc(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        double x = (i + 0.5) * h;
        double ang = -2.0 * kPi * m * x;
        acc += (f[i] - mean) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return std::abs(acc) * h;
}

void DiagnosticsSeries::append(double t_, double mr, double mb, double ent, double lyap,
                               double seg, double aniso, double pl2) {
    t.push_back(t_);
    M_r.push_back(mr);
    M_b.push_back(mb);
    entropy.push_back(ent);
    lyapunov.push_back(lyap);
    segregation.push_back(seg);
    anisotropy.push_back(aniso);
    pert_l2.push_back(pl2);
}

} // namespace crossflow
