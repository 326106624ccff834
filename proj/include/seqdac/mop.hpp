#pragma once

#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace seqdac {

// Box-constrained multi-objective minimization problem.
class MopProblem {
public:
    virtual ~MopProblem() = default;

    const std::string& name() const { return name_; }
    int objectives() const { return m_; }
    int dim() const { return d_; }
    double lower(int i) const { return lower_[i]; }
    double upper(int i) const { return upper_[i]; }

    // Deterministic; throws on out-of-bounds input (callers repair first).
    std::vector<double> evaluate(std::span<const double> x) const;

protected:
    MopProblem(std::string name, int m, int d) : name_(std::move(name)), m_(m), d_(d) {}
    virtual void evaluate_impl(std::span<const double> x,
                               std::vector<double>& f) const = 0;

    std::string name_;
    int m_;
    int d_;
    std::vector<double> lower_, upper_;
};

// Supported names: DTLZ2, DTLZ4, WFG4..WFG9. WFG problems use 2*(m-1)
// position parameters, so D must exceed that.
std::unique_ptr<MopProblem> make_problem(const std::string& name, int m, int d);

// Sampled Pareto front used for IGD and for objective normalization:
// simplex-lattice directions projected to the unit sphere octant, scaled by
// (2, 4, ..., 2m) for the WFG problems. At least min_points rows.
std::vector<std::vector<double>> reference_front(const std::string& name, int m,
                                                 int min_points = 500);

// CSV interchange for front files: header comment naming problem and m, one
// objective vector per row.
void write_front_csv(std::ostream& out, const std::string& name, int m,
                     const std::vector<std::vector<double>>& front);
std::vector<std::vector<double>> read_front_csv(std::istream& in, std::string* name,
                                                int* m);

} // namespace seqdac
