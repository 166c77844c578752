#pragma once

#include "fsi2d/cut.hpp"
#include "fsi2d/fluid.hpp"

#include <stdexcept>

namespace fsi2d {

/// A node inside the fluid at the new level had no value at the old level.
class CflViolation : public std::runtime_error {
 public:
  CflViolation(const std::string& what, int node) : std::runtime_error(what), node_(node) {}
  int node() const { return node_; }

 private:
  int node_;
};

/// A free extension DOF is not connected through facets to any prescribed value.
class IsolatedGhost : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DofStatus { Copied, NeedsExtension, Violation };

/// Per compact DOF of the current space.
struct DofCorrespondence {
  std::vector<DofStatus> status;
  std::vector<int> source;  ///< compact index in the previous space, -1 unless copied

  int count(DofStatus s) const;
  bool identity() const;  ///< every DOF copied from the same compact index
};

/// Copy if the node was active before and its support meets the fluid at both levels.
DofCorrespondence match_dofs(const CutConfiguration& prev, const CutConfiguration& curr);

struct PartialValues {
  Eigen::VectorXd values;  ///< ncomp entries per current DOF; zero where extension is needed
  DofCorrespondence corr;
};

/// Transfer/copy phase; throws CflViolation.
PartialValues transfer_copy(const CutConfiguration& prev, const CutConfiguration& curr,
                            const Eigen::VectorXd& values_prev, int ncomp);

/// Minimizes the normal-derivative jumps over the ghost facets of `curr` with the
/// copied DOFs held fixed; applied componentwise.
Eigen::VectorXd extension_solve(const CutConfiguration& curr, const Eigen::VectorXd& values_partial,
                                const DofCorrespondence& corr, int ncomp);

/// Extension matrix restricted to the free DOFs (scalar, one entry per free DOF).
Eigen::MatrixXd extension_matrix(const CutConfiguration& curr, const DofCorrespondence& corr);

/// Full projection of velocity, pressure and acceleration.
FluidVectors project_fluid(const CutConfiguration& prev, const CutConfiguration& curr, const FluidVectors& v);

}  // namespace fsi2d
