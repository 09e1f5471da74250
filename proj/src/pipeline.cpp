#include "arm/pipeline.hpp"

namespace arm {

ClusteringRun cluster_subspaces(const Matrix& x, const PipelineConfig& cfg) {
  cfg.spectral.validate(x.cols());
  ClusteringRun run;
  run.solve = solve(x, cfg.solver, cfg.surrogate);
  run.graph = build_affinity(run.solve.z, cfg.alpha, cfg.svd_rel_tol);
  run.clusters = ncuts(run.graph.w, cfg.spectral);
  return run;
}

}  // namespace arm
