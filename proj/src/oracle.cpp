#include "ct/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace ct {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

struct RestartOutcome {
  double fidelity = 0.0;
  long iterations = 0;
};

// The whole computation lives in coordinates of the span of the generators
//   x_i (x) anc_0          (the prepared inputs)
//   y_j (x) anc_a, a < k   (every way the outputs can sit next to the ancilla)
// so only overlap matrices enter and the physical dimension never appears.
struct Workspace {
  Eigen::Index m = 0;  // number of task pairs
  int k = 1;           // ancilla dimension
  Mat inputs;          // r x m, orthonormal-basis coordinates of the inputs
  Mat outputs;         // r x (m*k), coordinates of y_j (x) anc_a
};

Workspace build_workspace(const QuantumModel& model, const Task& task, int k) {
  const Eigen::Index m = static_cast<Eigen::Index>(task.size());
  std::vector<AttrTuple> ins, outs;
  for (const TaskPair& p : task.pairs()) {
    ins.push_back(p.in);
    outs.push_back(p.out);
  }
  Mat gx = model.gram(ins);
  Mat gy = model.gram(outs);
  Mat gxy(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = 0; j < m; ++j) gxy(i, j) = model.overlap(ins[i], outs[j]);

  const Eigen::Index n = m + m * k;
  Mat g = Mat::Zero(n, n);
  g.topLeftCorner(m, m) = gx;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      g(i, m + j * k) = gxy(i, j);  // ancilla part matches only at a = 0
      g(m + j * k, i) = std::conj(gxy(i, j));
      for (int a = 0; a < k; ++a) g(m + i * k + a, m + j * k + a) = gy(i, j);
    }
  }

  Eigen::SelfAdjointEigenSolver<Mat> eig(g);
  const auto& lambda = eig.eigenvalues();
  double cutoff = std::max(1e-12, 1e-12 * lambda.maxCoeff());
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (lambda[i] > cutoff) ++rank;

  // coords = sqrt(lambda) P^H on the kept eigenpairs reproduces g exactly.
  Mat coords(rank, n);
  Eigen::Index row = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lambda[i] <= cutoff) continue;
    coords.row(row++) = std::sqrt(lambda[i]) * eig.eigenvectors().col(i).adjoint();
  }

  Workspace w;
  w.m = m;
  w.k = k;
  w.inputs = coords.leftCols(m);
  w.outputs = coords.rightCols(m * k);
  return w;
}

Mat random_unitary(Eigen::Index r, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a(r, r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j) a(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat rmat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < r; ++i) {
    std::complex<double> d = rmat(i, i);
    q.col(i) *= (std::abs(d) > 1e-30) ? d / std::abs(d) : 1.0;
  }
  return q;
}

RestartOutcome run_restart(const Workspace& w, const OracleParams& params, int restart) {
  const Eigen::Index r = w.inputs.rows();
  const Eigen::Index m = w.m;
  const int k = w.k;

  std::mt19937_64 rng(splitmix64(params.seed * 0x51ed270b0059db6dull + restart));
  Mat u = (restart == 0) ? Mat(Mat::Identity(r, r)) : random_unitary(r, rng);

  RestartOutcome out;
  const int burn_in = std::max(1, params.iterations / 6);
  long stale = 0;

  Mat targets(r, m);
  Eigen::VectorXd fid(m), weight(m);
  for (int iter = 0; iter < params.iterations; ++iter) {
    Mat images = u * w.inputs;  // Gram of the inputs is preserved exactly

    // Ancilla-conditional amplitudes c_i[a] = <y_i anc_a | image_i>; the best
    // achievable overlap with y_i (x) (free ancilla state) is |c_i|.
    for (Eigen::Index i = 0; i < m; ++i) {
      Eigen::VectorXcd c(k);
      for (int a = 0; a < k; ++a) c[a] = w.outputs.col(i * k + a).dot(images.col(i));
      double f = c.norm();
      fid[i] = f;
      Eigen::VectorXcd direction = (f > 1e-9) ? Eigen::VectorXcd(c / f) : [&] {
        Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(k);
        e0[0] = 1.0;
        return e0;
      }();
      targets.col(i).setZero();
      for (int a = 0; a < k; ++a) targets.col(i) += direction[a] * w.outputs.col(i * k + a);
    }

    double worst = fid.minCoeff();
    if (worst > out.fidelity + 1e-12) {
      out.fidelity = worst;
      stale = 0;
    } else {
      ++stale;
    }
    ++out.iterations;
    if (out.fidelity >= 1.0 - 1e-10) break;
    if (stale > 60) break;

    // Uniform weights first; then press on the worst pairs.
    if (iter < burn_in) {
      weight.setOnes();
    } else {
      double beta = 40.0 * double(iter - burn_in) / std::max(1, params.iterations - burn_in);
      for (Eigen::Index i = 0; i < m; ++i) weight[i] = std::exp(beta * (1.0 - fid[i]));
    }
    weight /= weight.sum();

    // Best unitary aligning images with the fixed targets: polar part of the
    // weighted cross matrix.
    Mat cross = Mat::Zero(r, r);
    for (Eigen::Index i = 0; i < m; ++i)
      cross += weight[i] * (w.inputs.col(i) * targets.col(i).adjoint());
    Eigen::JacobiSVD<Mat> svd(cross, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixV() * svd.matrixU().adjoint();
  }
  return out;
}

OracleResult merge(const std::vector<RestartOutcome>& outcomes) {
  OracleResult best;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    best.iterations += outcomes[i].iterations;
    if (outcomes[i].fidelity > best.fidelity) {
      best.fidelity = outcomes[i].fidelity;
      best.best_restart = static_cast<int>(i);
    }
  }
  return best;
}

}  // namespace

OracleResult oracle_max_fidelity_serial(const QuantumModel& model, const Task& task,
                                        const OracleParams& params) {
  if (task.empty()) return OracleResult{1.0, 0, 0};
  Workspace w = build_workspace(model, task, params.ancilla_dim);
  std::vector<RestartOutcome> outcomes(params.restarts);
  for (int rs = 0; rs < params.restarts; ++rs) outcomes[rs] = run_restart(w, params, rs);
  return merge(outcomes);
}

OracleResult oracle_max_fidelity(const QuantumModel& model, const Task& task,
                                 const OracleParams& params) {
  if (task.empty()) return OracleResult{1.0, 0, 0};
#ifdef CT_HAVE_OPENMP
  Workspace w = build_workspace(model, task, params.ancilla_dim);
  std::vector<RestartOutcome> outcomes(params.restarts);
#pragma omp parallel for schedule(dynamic)
  for (int rs = 0; rs < params.restarts; ++rs) outcomes[rs] = run_restart(w, params, rs);
  return merge(outcomes);
#else
  return oracle_max_fidelity_serial(model, task, params);
#endif
}

}  // namespace ct
