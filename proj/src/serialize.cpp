#include "slr/serialize.hpp"

namespace slr {

namespace {

Json matrixJson(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

Json toJson(const GammaRange& range) {
    return Json{{"lower", range.lower},
                {"upper", range.upper},
                {"recommended", range.recommended},
                {"valid", range.valid}};
}

Json toJson(const DecompositionResult& result) {
    Json out{{"iterations", result.iterations},
             {"primal_residual", result.primalResidual},
             {"objective", result.objective},
             {"converged", result.converged},
             {"gamma_used", result.gammaUsed}};
    if (result.tUsed) out["t_used"] = *result.tUsed;
    return out;
}

Json toJson(const CertificateResult& result) {
    return Json{{"q_hat", matrixJson(result.qHat)},
                {"eps_omega_inf", result.epsOmegaInf},
                {"eps_t_spec", result.epsTSpec},
                {"cond_pt_equals_uv", result.condPtEqualsUv},
                {"cond_pomega_equals_sign", result.condPomegaEqualsSign},
                {"cond_tperp_norm", result.condTperpNorm},
                {"cond_omegac_inf", result.condOmegacInf},
                {"transversality_sigma", result.transversalitySigma},
                {"fixed_point_iters", result.fixedPointIters},
                {"verdict", toString(result.verdict)}};
}

Json toJson(const IncoherenceReport& report) {
    Json out{{"mu", report.mu},
             {"deg_min", report.degMin},
             {"deg_max", report.degMax},
             {"degenerate_support", report.degenerateSupport},
             {"beta_row", report.betaRow},
             {"beta_col", report.betaCol},
             {"inc", report.inc},
             {"xi_lower", report.xiLower},
             {"xi_upper", report.xiUpper},
             {"uncertainty_product_upper", report.uncertaintyProductUpper},
             {"theorem_condition", report.theoremCondition},
             {"corollary_condition", report.corollaryCondition},
             {"gamma_range_thm", toJson(report.gammaRangeThm)},
             {"gamma_range_cor", toJson(report.gammaRangeCor)}};
    out["xi_sampled_lower"] =
        report.xiSampledLower ? Json(*report.xiSampledLower) : Json(nullptr);
    out["gamma_recommended"] =
        report.gammaRecommended ? Json(*report.gammaRecommended) : Json(nullptr);
    return out;
}

Json toJson(const LemmaReport& report) {
    return Json{{"trials", report.trials},
                {"satisfied", report.satisfied},
                {"fraction", report.fraction},
                {"bound_formula", report.boundFormula},
                {"constant", report.constant}};
}

Json toJson(const SweepResult& result) {
    Json plateaus = Json::array();
    for (const Plateau& p : result.plateaus)
        plateaus.push_back(Json{{"t_start", p.tStart}, {"t_end", p.tEnd}, {"label", p.label}});
    Json out{{"t_grid", result.tGrid}, {"diff_t", result.diffT}, {"plateaus", plateaus}};
    out["tol_t"] = result.tolT ? Json(*result.tolT) : Json(nullptr);
    out["chosen_t"] = result.chosenT ? Json(*result.chosenT) : Json(nullptr);
    return out;
}

Json toJson(const RigidityResult& result) {
    return Json{{"n", result.n},
                {"m_planted", result.mPlanted},
                {"k_target", result.kTarget},
                {"support_size_found", result.supportSizeFound},
                {"rank_found", result.rankFound},
                {"certified", result.certified},
                {"gamma_used", result.gammaUsed}};
}

Json toJson(const OptimalityReport& report) {
    return Json{{"sign_equality_inf", report.signEqualityInf},
                {"omega_complement_excess", report.omegaComplementExcess},
                {"tperp_excess", report.tperpExcess},
                {"pt_equality_fro", report.ptEqualityFro},
                {"sparse_side_skipped", report.sparseSideSkipped},
                {"lowrank_side_skipped", report.lowRankSideSkipped},
                {"fixed_point_converged", report.fixedPointConverged}};
}

}  // namespace slr
