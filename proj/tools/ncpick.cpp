// Command-line front end: feasibility tests, NP/ANP norms, the column-row
// search loop, the self-verification suites, example node generation and
// algebra-membership queries. All randomness is seeded and every file
// output gets a manifest written next to it.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncpick/asymptotics.hpp"
#include "ncpick/io.hpp"
#include "ncpick/search.hpp"
#include "ncpick/verify.hpp"
#include "ncpick/zoo.hpp"

namespace {

constexpr const char* kToolVersion = "ncpick 0.1.0";

// exit codes, disjoint by failure mode
constexpr int kOk = 0;
constexpr int kGenericError = 1;
constexpr int kParseError = 2;
constexpr int kInfeasible = 10;
constexpr int kNotInAlgebra = 11;
constexpr int kAnpPrecondition = 12;
constexpr int kBudgetExhausted = 20;
constexpr int kVerifyFailed = 30;

using ncpick::Json;

Json loadJson(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ncpick::ParseError("cannot open '" + path + "'");
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw ncpick::ParseError("JSON parse failure in '" + path + "': " + e.what());
    }
    return j;
}

void writeFile(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ncpick::Error("cannot write '" + path + "'");
    out << content;
}

std::string isoNow() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void writeManifest(const std::string& outPath, const std::string& command,
                   const Json& config, uint64_t seed) {
    Json m{{"command", command},
           {"config", config},
           {"toolVersion", kToolVersion},
           {"masterSeed", seed},
           {"timestamp", isoNow()}};
    writeFile(outPath + ".manifest.json", m.dump(2) + "\n");
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<double> parseGrid(const std::string& csv) {
    std::vector<double> g;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) g.push_back(std::stod(tok));
    return g;
}

void emitOrPrint(const Json& j, const std::string& outPath,
                 const std::string& command, const Json& config, uint64_t seed) {
    std::string body = j.dump(2) + "\n";
    if (outPath.empty()) {
        std::cout << body;
    } else {
        writeFile(outPath, body);
        writeManifest(outPath, command, config, seed);
    }
}

int cmdFeasible(const std::string& nodeFile, const std::string& targetFile,
                const std::string& outPath, const ncpick::Tolerances& tol) {
    ncpick::RowTuple x = ncpick::io::rowTupleFromJson(loadJson(nodeFile));
    ncpick::BlockTarget y = ncpick::io::blockTargetFromJson(loadJson(targetFile));
    auto b = ncpick::pickMatrix(x, tol);
    Json cfg{{"node", nodeFile}, {"target", targetFile}};
    try {
        auto f = ncpick::feasible(b, y, tol);
        Json report{{"feasible", f.feasible},
                    {"margin", f.margin},
                    {"algResiduals", Json::array()}};
        emitOrPrint(report, outPath, "feasible", cfg, 0);
        return f.feasible ? kOk : kInfeasible;
    } catch (const ncpick::NotInAlgebra& e) {
        Json res = Json::array();
        for (const auto& [i, j, r] : e.offenders)
            res.push_back(Json{{"blockRow", i}, {"blockCol", j}, {"residual", r}});
        Json report{{"feasible", false}, {"error", e.what()}, {"algResiduals", res}};
        emitOrPrint(report, outPath, "feasible", cfg, 0);
        return kNotInAlgebra;
    }
}

int cmdNpNorm(const std::string& nodeFile, const std::string& targetFile,
              const std::string& outPath, const std::string& precondFile,
              bool anp, const std::string& tGridCsv, bool choiCheck,
              const ncpick::Tolerances& tol) {
    ncpick::RowTuple x = ncpick::io::rowTupleFromJson(loadJson(nodeFile));
    ncpick::BlockTarget y = ncpick::io::blockTargetFromJson(loadJson(targetFile));
    Json cfg{{"node", nodeFile}, {"target", targetFile}, {"anp", anp}};
    Json report;
    try {
        if (anp) {
            auto grid = parseGrid(tGridCsv.empty() ? "0.9,0.99,0.999" : tGridCsv);
            auto r = ncpick::anpNorm(x, y, grid, tol);
            Json trace = Json::array();
            for (const auto& p : r.trace)
                trace.push_back(Json{{"t", p.t}, {"npNorm", p.npNorm}});
            report = Json{{"anpTrace", trace},
                          {"value", r.value},
                          {"targetNorm", r.targetNorm},
                          {"drift", r.drift},
                          {"ratio", r.value / std::max(r.targetNorm, 1e-300)}};
        } else {
            auto b = ncpick::pickMatrix(x, tol);
            double v;
            if (!precondFile.empty()) {
                ncpick::Matrix d = ncpick::io::matrixFromJson(loadJson(precondFile));
                v = ncpick::npNormPreconditioned(b, y, d, tol);
            } else {
                v = ncpick::npNorm(b, y, tol);
            }
            double tn = y.norm();
            report = Json{{"npNorm", v},
                          {"targetNorm", tn},
                          {"ratio", v / std::max(tn, 1e-300)}};
            if (choiCheck) {
                // the node must be t * (E_ij / sqrt(n)); t is its row norm
                double t = ncpick::rowNorm(x);
                int n = x.n;
                ncpick::Matrix closed =
                    ncpick::choiMatrix(n) +
                    t * t / (double(n) * (1.0 - t * t)) *
                        ncpick::identity(Eigen::Index(n) * n);
                report["closedFormGap"] = (b.P - closed).norm();
            }
        }
    } catch (const ncpick::NotInAlgebra& e) {
        std::cerr << e.what() << "\n";
        return kNotInAlgebra;
    } catch (const ncpick::NotCoisometry& e) {
        std::cerr << e.what() << "\n";
        return kAnpPrecondition;
    } catch (const ncpick::NotIrreducible& e) {
        std::cerr << e.what() << "\n";
        return kAnpPrecondition;
    } catch (const ncpick::DegenerateGap& e) {
        std::cerr << e.what() << "\n";
        return kAnpPrecondition;
    }
    emitOrPrint(report, outPath, "npnorm", cfg, 0);
    return kOk;
}

std::string recordCsvRow(const ncpick::SearchRecord& r, int n, int m) {
    std::ostringstream os;
    os << r.trialIndex << ',' << r.seed << ',' << n << ',' << m << ','
       << fmt17(r.epsilon) << ',' << fmt17(r.colNormNP) << ',' << fmt17(r.rowNormNP)
       << ',' << fmt17(r.ratio) << ',' << fmt17(r.elapsedMs) << '\n';
    return os.str();
}

Json recordJson(const ncpick::SearchRecord& r) {
    Json ys = Json::array();
    for (const auto& y : r.Ys) ys.push_back(ncpick::io::toJson(y));
    return Json{{"trialIndex", r.trialIndex}, {"seed", r.seed},
                {"epsilon", r.epsilon},      {"X", ncpick::io::toJson(r.X)},
                {"Ys", ys},                  {"rowNormNP", r.rowNormNP},
                {"colNormNP", r.colNormNP},  {"ratio", r.ratio}};
}

int cmdSearch(const std::string& configFile, const std::string& outDir,
              bool deterministic, int detN, double detT, int jobsOverride,
              const ncpick::Tolerances& tol) {
    std::string csvPath = outDir + "/search.csv";
    std::string bestPath = outDir + "/best.json";
    static const char* kHeader =
        "trialIndex,seed,n,m,epsilon,colNormNP,rowNormNP,ratio,elapsed_ms\n";

    if (deterministic) {
        auto r = ncpick::deterministicColrow(detN, detT, tol);
        std::string csv = kHeader + recordCsvRow(r, detN, detN);
        writeFile(csvPath, csv);
        writeManifest(csvPath, "search --deterministic",
                      Json{{"n", detN}, {"t", detT}}, 0);
        writeFile(bestPath, recordJson(r).dump(2) + "\n");
        writeManifest(bestPath, "search --deterministic",
                      Json{{"n", detN}, {"t", detT}}, 0);
        std::cout << "ratio " << fmt17(r.ratio) << "\n";
        return kOk;
    }

    ncpick::SearchConfig cfg = ncpick::io::searchConfigFromJson(loadJson(configFile));
    if (jobsOverride > 0) cfg.jobs = jobsOverride;
    std::ostringstream csv;
    csv << kHeader;
    auto res = ncpick::randomSearch(
        cfg, [&](const ncpick::SearchRecord& r) { csv << recordCsvRow(r, cfg.n, cfg.m); },
        tol);
    writeFile(csvPath, csv.str());
    writeManifest(csvPath, "search", ncpick::io::toJson(cfg), cfg.seed);
    if (res.best.valid) {
        writeFile(bestPath, recordJson(res.best).dump(2) + "\n");
        writeManifest(bestPath, "search", ncpick::io::toJson(cfg), cfg.seed);
    }
    std::cout << (res.success ? "success" : "budget-exhausted") << " trials "
              << res.trialsRun << " maxRatio " << fmt17(res.maxRatio) << "\n";
    return res.success ? kOk : kBudgetExhausted;
}

int cmdVerify(const std::string& level, uint64_t seed, bool corruptPsi) {
    ncpick::VerifyOptions opt;
    opt.full = (level == "full");
    opt.seed = seed;
    opt.corruptPsi = corruptPsi;
    auto results = ncpick::runVerify(opt);
    bool allPass = true;
    for (const auto& r : results) {
        std::cout << (r.passed ? "PASS" : "FAIL") << "  " << r.name << "  residual "
                  << fmt17(r.worstResidual) << "  tol " << fmt17(r.tolerance);
        if (!r.note.empty()) std::cout << "  (" << r.note << ")";
        std::cout << "\n";
        allPass = allPass && r.passed;
    }
    return allPass ? kOk : kVerifyFailed;
}

int cmdExamples(const std::string& kind, int n, int d, double epsilon,
                uint64_t seed, double scale, const std::string& outPath) {
    ncpick::io::NodeSpec spec;
    spec.kind = kind;
    spec.n = n;
    spec.d = d;
    spec.epsilon = epsilon;
    spec.seed = seed;
    ncpick::RowTuple x = ncpick::io::resolveNode(spec);
    if (scale > 0.0) x = x.scaled(scale);
    Json cfg{{"kind", kind}, {"n", n},       {"d", d},
             {"epsilon", epsilon}, {"seed", seed}, {"scale", scale}};
    emitOrPrint(ncpick::io::toJson(x), outPath, "examples", cfg, seed);
    return kOk;
}

int cmdAlgMember(const std::string& nodeFile, const std::string& matrixFile,
                 const ncpick::Tolerances& tol) {
    ncpick::RowTuple x = ncpick::io::rowTupleFromJson(loadJson(nodeFile));
    ncpick::Matrix z = ncpick::io::matrixFromJson(loadJson(matrixFile));
    auto b = ncpick::pickMatrix(x, tol);
    auto m = ncpick::algMember(z, b, tol);
    Json report{{"member", m.member}, {"residual", m.residual}};
    std::cout << report.dump(2) << "\n";
    return m.member ? kOk : kNotInAlgebra;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pick-matrix interpolation toolkit"};
    app.require_subcommand(1);

    ncpick::Tolerances tol;
    app.add_option("--rank-tol", tol.rankTol, "relative rank cutoff");
    app.add_option("--psd-tol", tol.psdTol, "relative PSD tolerance");

    std::string nodeFile, targetFile, outPath, precondFile, configFile, outDir;
    std::string matrixFile, tGrid, kind, level = "quick";
    bool anp = false, choiCheck = false, corruptPsi = false, deterministic = false;
    int n = 2, d = 2, detN = 2, jobs = 0;
    double epsilon = 1e-2, scale = 0.0, detT = 0.999;
    uint64_t seed = 0;

    auto* feas = app.add_subcommand("feasible", "norm-one interpolant existence test");
    feas->add_option("--node", nodeFile)->required();
    feas->add_option("--target", targetFile)->required();
    feas->add_option("--out", outPath);

    auto* npn = app.add_subcommand("npnorm", "minimal interpolant norm");
    npn->add_option("--node", nodeFile)->required();
    npn->add_option("--target", targetFile)->required();
    npn->add_option("--out", outPath);
    npn->add_option("--precondition", precondFile, "commutant preconditioner matrix");
    npn->add_flag("--anp", anp, "boundary limit along a t grid");
    npn->add_option("--t-grid", tGrid, "comma-separated t values");
    npn->add_flag("--choi-check", choiCheck, "closed-form cross-check for Choi-type nodes");

    auto* sea = app.add_subcommand("search", "column-row ratio search");
    sea->add_option("--config", configFile);
    sea->add_option("--out-dir", outDir)->required();
    sea->add_flag("--deterministic", deterministic, "explicit shift/DFT construction");
    sea->add_option("--det-n", detN, "size for the deterministic construction");
    sea->add_option("--det-t", detT, "scale for the deterministic construction");
    sea->add_option("--jobs", jobs, "worker count override");

    auto* ver = app.add_subcommand("verify", "identity self-checks");
    ver->add_option("level", level, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}));
    ver->add_option("--seed", seed);
    ver->add_flag("--corrupt-psi", corruptPsi, "negative-control hook");

    auto* exa = app.add_subcommand("examples", "generate example nodes");
    exa->add_option("--kind", kind)->required();
    exa->add_option("--n", n);
    exa->add_option("--d", d);
    exa->add_option("--epsilon", epsilon);
    exa->add_option("--seed", seed);
    exa->add_option("--scale", scale, "scale the node by t after generation");
    exa->add_option("--out", outPath);

    auto* alg = app.add_subcommand("alg-member", "generated-algebra membership");
    alg->add_option("--node", nodeFile)->required();
    alg->add_option("--matrix", matrixFile)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (feas->parsed()) return cmdFeasible(nodeFile, targetFile, outPath, tol);
        if (npn->parsed())
            return cmdNpNorm(nodeFile, targetFile, outPath, precondFile, anp, tGrid,
                             choiCheck, tol);
        if (sea->parsed()) {
            if (!deterministic && configFile.empty())
                throw ncpick::ParseError("search: --config required unless --deterministic");
            return cmdSearch(configFile, outDir, deterministic, detN, detT, jobs, tol);
        }
        if (ver->parsed()) return cmdVerify(level, seed, corruptPsi);
        if (exa->parsed()) return cmdExamples(kind, n, d, epsilon, seed, scale, outPath);
        if (alg->parsed()) return cmdAlgMember(nodeFile, matrixFile, tol);
    } catch (const ncpick::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kParseError;
    } catch (const ncpick::BudgetExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBudgetExhausted;
    } catch (const ncpick::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGenericError;
    }
    return kGenericError;
}
