#include "seqdac/mop.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace seqdac {

namespace {

constexpr double kPi = 3.14159265358979323846;

} // namespace

std::vector<double> MopProblem::evaluate(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != d_)
        throw std::invalid_argument(name_ + ": wrong decision vector length");
    for (int i = 0; i < d_; ++i)
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i]))
            throw std::domain_error(name_ + ": decision variable out of bounds");
    std::vector<double> f(m_);
    evaluate_impl(x, f);
    return f;
}

// -- DTLZ ---------------------------------------------------------------------

namespace {

// alpha = 1 gives DTLZ2; alpha = 100 gives DTLZ4's biased density.
class DtlzProblem : public MopProblem {
public:
    DtlzProblem(std::string name, int m, int d, double alpha)
        : MopProblem(std::move(name), m, d), alpha_(alpha) {
        if (d < m) throw std::invalid_argument(name_ + ": needs D >= m");
        lower_.assign(d, 0.0);
        upper_.assign(d, 1.0);
    }

protected:
    void evaluate_impl(std::span<const double> x, std::vector<double>& f) const override {
        double g = 0.0;
        for (int i = m_ - 1; i < d_; ++i) g += (x[i] - 0.5) * (x[i] - 0.5);
        for (int j = 0; j < m_; ++j) {
            double v = 1.0 + g;
            for (int i = 0; i < m_ - 1 - j; ++i)
                v *= std::cos(theta(x[i]));
            if (j > 0) v *= std::sin(theta(x[m_ - 1 - j]));
            f[j] = v;
        }
    }

private:
    double theta(double xi) const { return std::pow(xi, alpha_) * kPi / 2.0; }
    double alpha_;
};

// -- WFG ----------------------------------------------------------------------

// Transformation functions from the WFG toolkit. All operate on values that
// have been normalized into [0, 1].
double b_param(double y, double u, double a, double b, double c) {
    double v = a - (1.0 - 2.0 * u) * std::fabs(std::floor(0.5 - u) + a);
    return std::pow(y, b + (c - b) * v);
}

double s_linear(double y, double a) {
    return std::fabs(y - a) / std::fabs(std::floor(a - y) + a);
}

double s_decept(double y, double a, double b, double c) {
    double tmp1 = std::floor(y - a + b) * (1.0 - c + (a - b) / b) / (a - b);
    double tmp2 = std::floor(a + b - y) * (1.0 - c + (1.0 - a - b) / b) / (1.0 - a - b);
    return 1.0 + (std::fabs(y - a) - b) * (tmp1 + tmp2 + 1.0 / b);
}

double s_multi(double y, double a, double b, double c) {
    double tmp1 = std::fabs(y - c) / (2.0 * (std::floor(c - y) + c));
    double tmp2 = (4.0 * a + 2.0) * kPi * (0.5 - tmp1);
    return (1.0 + std::cos(tmp2) + 4.0 * b * tmp1 * tmp1) / (b + 2.0);
}

double r_sum(std::span<const double> y) {
    double acc = 0.0;
    for (double v : y) acc += v;
    return acc / static_cast<double>(y.size());
}

double r_nonsep(std::span<const double> y, int a) {
    int ny = static_cast<int>(y.size());
    double numerator = 0.0;
    for (int j = 0; j < ny; ++j) {
        numerator += y[j];
        for (int k = 0; k <= a - 2; ++k)
            numerator += std::fabs(y[j] - y[(j + k + 1) % ny]);
    }
    double half_up = std::ceil(a / 2.0);
    double denominator =
        (ny / static_cast<double>(a)) * half_up * (1.0 + 2.0 * a - 2.0 * half_up);
    return numerator / denominator;
}

class WfgProblem : public MopProblem {
public:
    WfgProblem(int which, int m, int d)
        : MopProblem("WFG" + std::to_string(which), m, d),
          which_(which),
          k_(2 * (m - 1)) {
        if (m < 2) throw std::invalid_argument(name_ + ": needs m >= 2");
        if (d <= k_)
            throw std::invalid_argument(name_ + ": needs D > 2*(m-1) position params");
        lower_.assign(d, 0.0);
        upper_.resize(d);
        for (int i = 0; i < d; ++i) upper_[i] = 2.0 * (i + 1);
    }

    int position_params() const { return k_; }

protected:
    void evaluate_impl(std::span<const double> x, std::vector<double>& f) const override {
        int n = d_;
        int l = n - k_;
        // Each transition level reads the whole previous vector.
        std::vector<double> y(n), t(n);
        for (int i = 0; i < n; ++i) y[i] = x[i] / upper_[i];

        switch (which_) {
        case 4:
            for (int i = 0; i < n; ++i) t[i] = s_multi(y[i], 30, 10, 0.35);
            y = t;
            break;
        case 5:
            for (int i = 0; i < n; ++i) t[i] = s_decept(y[i], 0.35, 0.001, 0.05);
            y = t;
            break;
        case 6:
            t = y;
            for (int i = k_; i < n; ++i) t[i] = s_linear(y[i], 0.35);
            y = t;
            break;
        case 7:
            t = y;
            for (int i = 0; i < k_; ++i) {
                double u = r_sum(std::span<const double>(y).subspan(i + 1));
                t[i] = b_param(y[i], u, 0.98 / 49.98, 0.02, 50);
            }
            y = t;
            for (int i = k_; i < n; ++i) t[i] = s_linear(y[i], 0.35);
            y = t;
            break;
        case 8:
            t = y;
            for (int i = k_; i < n; ++i) {
                double u = r_sum(std::span<const double>(y).subspan(0, i));
                t[i] = b_param(y[i], u, 0.98 / 49.98, 0.02, 50);
            }
            y = t;
            for (int i = k_; i < n; ++i) t[i] = s_linear(y[i], 0.35);
            y = t;
            break;
        case 9:
            t = y;
            for (int i = 0; i < n - 1; ++i) {
                double u = r_sum(std::span<const double>(y).subspan(i + 1));
                t[i] = b_param(y[i], u, 0.98 / 49.98, 0.02, 50);
            }
            y = t;
            for (int i = 0; i < k_; ++i) t[i] = s_decept(y[i], 0.35, 0.001, 0.05);
            for (int i = k_; i < n; ++i) t[i] = s_multi(y[i], 30, 95, 0.35);
            y = t;
            break;
        default:
            throw std::logic_error("unsupported WFG index");
        }

        // Reduction to m underlying parameters.
        std::vector<double> tp(m_);
        int group = k_ / (m_ - 1);
        bool nonsep = which_ == 6 || which_ == 9;
        for (int j = 0; j < m_ - 1; ++j) {
            std::span<const double> slice(y.data() + j * group, group);
            tp[j] = nonsep ? r_nonsep(slice, group) : r_sum(slice);
        }
        std::span<const double> tail(y.data() + k_, l);
        tp[m_ - 1] = nonsep ? r_nonsep(tail, l) : r_sum(tail);

        // Degenerate A_i = 1 for these problems: the shape inputs equal tp.
        double dist = tp[m_ - 1];
        for (int j = 0; j < m_; ++j) {
            double h;
            if (j == m_ - 1) {
                h = std::cos(tp[0] * kPi / 2.0);
            } else {
                h = 1.0;
                for (int i = 0; i < m_ - 1 - j; ++i) h *= std::sin(tp[i] * kPi / 2.0);
                if (j > 0) h *= std::cos(tp[m_ - 1 - j] * kPi / 2.0);
            }
            f[j] = dist + 2.0 * (j + 1) * h;
        }
    }

private:
    int which_;
    int k_;
};

} // namespace

std::unique_ptr<MopProblem> make_problem(const std::string& name, int m, int d) {
    if (name == "DTLZ2") return std::make_unique<DtlzProblem>(name, m, d, 1.0);
    if (name == "DTLZ4") return std::make_unique<DtlzProblem>(name, m, d, 100.0);
    if (name.size() == 4 && name.compare(0, 3, "WFG") == 0) {
        int which = name[3] - '0';
        if (which >= 4 && which <= 9)
            return std::make_unique<WfgProblem>(which, m, d);
    }
    throw std::invalid_argument("unknown problem: " + name);
}

// -- reference fronts -----------------------------------------------------------

namespace {

void lattice_recurse(int m, int h, int level, std::vector<int>& parts,
                     std::vector<std::vector<double>>& out) {
    if (level == m - 1) {
        parts[level] = h;
        std::vector<double> direction(m);
        double norm = 0.0;
        for (int i = 0; i < m; ++i) norm += static_cast<double>(parts[i]) * parts[i];
        norm = std::sqrt(norm);
        for (int i = 0; i < m; ++i) direction[i] = parts[i] / norm;
        out.push_back(std::move(direction));
        return;
    }
    for (int v = 0; v <= h; ++v) {
        parts[level] = v;
        lattice_recurse(m, h - v, level + 1, parts, out);
    }
}

} // namespace

std::vector<std::vector<double>> reference_front(const std::string& name, int m,
                                                 int min_points) {
    bool wfg = name.compare(0, 3, "WFG") == 0;
    if (!wfg && name != "DTLZ2" && name != "DTLZ4")
        throw std::invalid_argument("no reference front for " + name);

    // smallest lattice parameter whose simplex point count reaches min_points
    int h = 1;
    auto count = [m](int hh) {
        double c = 1.0;
        for (int i = 1; i <= m - 1; ++i) c = c * (hh + i) / i;
        return c;
    };
    while (count(h) < min_points) ++h;

    std::vector<std::vector<double>> front;
    std::vector<int> parts(m, 0);
    lattice_recurse(m, h, 0, parts, front);

    if (wfg)
        for (auto& p : front)
            for (int j = 0; j < m; ++j) p[j] *= 2.0 * (j + 1);
    return front;
}

void write_front_csv(std::ostream& out, const std::string& name, int m,
                     const std::vector<std::vector<double>>& front) {
    out << "# front: " << name << " m=" << m << "\n";
    for (const auto& p : front) {
        char buf[32];
        for (int j = 0; j < m; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", p[j]);
            out << (j ? "," : "") << buf;
        }
        out << "\n";
    }
}

std::vector<std::vector<double>> read_front_csv(std::istream& in, std::string* name,
                                                int* m) {
    std::vector<std::vector<double>> front;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream hdr(line);
            std::string hash, key, pname, mtok;
            hdr >> hash >> key >> pname >> mtok;
            if (name) *name = pname;
            if (m && mtok.size() > 2) *m = std::stoi(mtok.substr(2));
            continue;
        }
        std::vector<double> row;
        std::istringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (!row.empty()) front.push_back(std::move(row));
    }
    if (front.empty()) throw std::runtime_error("empty front file");
    return front;
}

} // namespace seqdac
