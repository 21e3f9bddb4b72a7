#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>
#include <openssl/evp.h>

#include "ppqe/costing.hpp"
#include "ppqe/hgh.hpp"
#include "ppqe/material.hpp"
#include "ppqe/verify.hpp"

#ifndef PPQE_VERSION
#define PPQE_VERSION "0.0.0"
#endif
#ifndef PPQE_DATA_DIR
#define PPQE_DATA_DIR "data"
#endif

namespace ppqe::cli {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "ppqe.report/1";

enum ExitCode { kOk = 0, kInputError = 2, kInfeasible = 3, kVerificationFailure = 4 };

// ---- inputs ----------------------------------------------------------------

inline std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 digest failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

struct InputFile {
    std::string path;
    std::string bytes;
    std::string sha256;
};

inline InputFile read_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    InputFile f{path, ss.str(), ""};
    f.sha256 = sha256_hex(f.bytes);
    return f;
}

inline nlohmann::json parse_json(const InputFile& f) {
    try {
        return nlohmann::json::parse(f.bytes);
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + f.path + "': " + e.what());
    }
}

inline std::string default_data_dir() { return PPQE_DATA_DIR; }

// A path that exists wins; otherwise a bare name is looked up among the shipped materials.
inline std::string resolve_material_path(const std::string& arg, const std::string& data_dir = default_data_dir()) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) return arg;
    for (const auto& cand : {fs::path(data_dir) / "materials" / arg, fs::path(data_dir) / "materials" / (arg + ".json")})
        if (fs::exists(cand)) return cand.string();
    throw InputError("material file '" + arg + "' not found");
}

inline std::string resolve_hgh_path(const std::string& arg, const std::string& data_dir = default_data_dir()) {
    return hgh::resolve_table_path(arg, (std::filesystem::path(data_dir) / "hgh.json").string());
}

// ---- estimate ----------------------------------------------------------------

struct EstimateArgs {
    std::string material;
    std::string hgh;  // empty: environment, then the shipped table
    std::optional<std::int64_t> planewaves;
    double error_ev = 0.043;
    double p_th = 0.75;
    std::string optimize = "cost";
    std::optional<std::int64_t> n_dirty;
    std::int64_t n_tof = 500;
    int b_r = 8;
    int n_aa = 35;
    int n_b = 50;
    int kappa = 1;
};

struct EstimateResult {
    costing::CostReport report;
    MaterialSpec material;
    InputFile material_file;
    InputFile hgh_file;
};

inline costing::Mode parse_mode(const std::string& s) {
    if (s == "cost") return costing::Mode::cost;
    if (s == "depth") return costing::Mode::depth;
    throw InputError("--optimize must be 'cost' or 'depth', got '" + s + "'");
}

inline EstimateResult run_estimate(const EstimateArgs& a) {
    if (!(a.error_ev > 0)) throw InputError("--error-ev must be positive");
    if (!(a.p_th > 0 && a.p_th < 1)) throw InputError("--p-th must lie in (0, 1)");
    EstimateResult out;
    out.hgh_file = read_input(resolve_hgh_path(a.hgh));
    out.material_file = read_input(resolve_material_path(a.material));
    const auto table = hgh::parse_table(parse_json(out.hgh_file));
    out.material = parse_material(parse_json(out.material_file), table);

    costing::RunConfig cfg;
    if (a.planewaves) cfg.N = *a.planewaves;
    else if (out.material.default_N) cfg.N = *out.material.default_N;
    else throw InputError("--planewaves is required: the material file has no default_N");
    if (a.n_dirty) cfg.n_dirty = *a.n_dirty;
    else if (out.material.default_n_dirty) cfg.n_dirty = *out.material.default_n_dirty;
    else throw InputError("--n-dirty is required: the material file has no default_n_dirty");
    cfg.eps_total = ev_to_hartree(a.error_ev);
    cfg.p_th = a.p_th;
    cfg.n_tof = a.n_tof;
    cfg.optimize = parse_mode(a.optimize);
    cfg.b_r = a.b_r;
    cfg.n_AA = a.n_aa;
    cfg.n_b = a.n_b;
    cfg.kappa = a.kappa;
    out.report = costing::total_report(cfg, out.material);
    return out;
}

inline ojson provenance(const std::vector<std::pair<std::string, const InputFile*>>& inputs) {
    ojson p;
    p["engine"] = "ppqe";
    p["version"] = PPQE_VERSION;
    ojson in = ojson::object();
    for (const auto& [key, f] : inputs) in[key] = {{"path", f->path}, {"sha256", f->sha256}};
    p["inputs"] = in;
    return p;
}

inline ojson to_json(const costing::QromUse& u) {
    return {{"name", u.name},           {"address_bits", u.n},   {"output_bits", u.b},
            {"beta", u.beta},           {"beta_limit", u.beta_limit}, {"kappa", u.kappa},
            {"dirty_qubits", u.dirty_qubits}, {"parallel_toffolis", u.parallel_toffolis}};
}

inline ojson to_json(const costing::Totals& t) {
    return {{"prep", t.prep}, {"sel", t.sel}, {"reflection", t.reflection}, {"per_step", t.per_step}};
}

inline ojson estimate_json(const EstimateResult& res, const EstimateArgs& a) {
    const auto& r = res.report;
    const auto& m = res.material;
    const auto& s = r.solution;
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "estimate";
    j["config"] = {{"material", m.name},
                   {"planewaves", r.config.N},
                   {"error_ev", a.error_ev},
                   {"error_hartree", r.config.eps_total},
                   {"p_th", r.config.p_th},
                   {"optimize", qrom::to_string(r.config.optimize)},
                   {"n_dirty", r.config.n_dirty},
                   {"n_tof", r.config.n_tof},
                   {"b_r", r.config.b_r},
                   {"n_aa", r.config.n_AA},
                   {"n_b", r.config.n_b},
                   {"kappa", r.config.kappa}};
    ojson species = ojson::array();
    for (const auto& sc : m.species) species.push_back({{"symbol", sc.species.symbol}, {"count", sc.count}});
    j["material"] = {{"name", m.name},
                     {"eta", m.eta},
                     {"atoms", m.L()},
                     {"species", species},
                     {"lattice_class", crystal::to_string(r.rec.ortho_class)},
                     {"volume_bohr3", r.rec.omega},
                     {"b_min", r.rec.b_min}};
    j["grid"] = {{"N", r.grid.N}, {"n_p", r.grid.n_p}, {"K", r.grid.K}, {"side", r.grid.side()}};
    j["lambda"] = {{"T", s.lambda.lambda_T},     {"V", s.lambda.lambda_V}, {"loc", s.lambda.lambda_loc},
                   {"NL", s.lambda.lambda_NL},   {"total", s.lambda.lambda}, {"ps_eta", s.lambda.ps_eta}};
    j["momentum_state_V"] = {{"n_MV", s.plan.n_MV},           {"lambda_nu_V", s.plan.lambda_nu_V},
                             {"P_nu_V", s.plan.P_nu_V},       {"amplification_rounds", s.plan.a_V},
                             {"P_amp", s.plan.P_amp}};
    ojson channels = ojson::array();
    const auto check = budget::verify(s.widths, s.budget, s.constants);
    for (const auto& c : check.channels)
        channels.push_back({{"name", c.name}, {"bits", c.n}, {"bound", c.bound}, {"allocation", c.allocation}});
    j["error_budget"] = {{"eps_total", s.budget.eps_total},
                         {"eps_QPE", s.budget.eps_QPE},
                         {"channels", channels},
                         {"master_inequality_holds", check.master_ok}};
    const auto& w = s.widths;
    j["bit_widths"] = {{"n_p", w.n_p},      {"n_eta", w.n_eta}, {"tau", w.tau},       {"max_n_t", w.max_n_t},
                       {"b_r", w.b_r},      {"n_AA", w.n_AA},   {"n_b", w.n_b},       {"n_chi", w.n_chi()},
                       {"n_B", w.n_B()},    {"n_NL", w.n_NL()}, {"n_R", w.n_R()},     {"n_MV", w.n_MV()},
                       {"n_Mloc", w.n_Mloc()}, {"n_Psi", w.n_Psi()}};
    ojson rows = ojson::array();
    for (const auto& row : r.rows) {
        ojson q = ojson::array();
        for (const auto& u : row.qroms) q.push_back(to_json(u));
        rows.push_back({{"group", costing::to_string(row.group)},
                        {"label", row.label},
                        {"toffoli", row.toffoli},
                        {"depth", row.depth},
                        {"qroms", q}});
    }
    j["rows"] = rows;
    j["totals"] = {{"cost", to_json(r.cost)},
                   {"depth", to_json(r.depth)},
                   {"iterations", r.iterations},
                   {"toffoli_count", r.total_toffoli},
                   {"toffoli_depth", r.total_depth}};
    const auto& q = r.qubits;
    j["qubits"] = {{"system", q.system},
                   {"qpe_control", q.qpe_control},
                   {"phase_gradient", q.phase_gradient},
                   {"persistent_clean", q.n_clean},
                   {"temporary_clean", q.n_tmp},
                   {"clean_total", q.clean_total},
                   {"dirty_max", q.dirty_max},
                   {"grand_total", q.grand_total}};
    j["warnings"] = r.warnings;
    j["provenance"] = provenance({{"material", &res.material_file}, {"hgh_table", &res.hgh_file}});
    return j;
}

inline std::string sci(double x, int digits = 3) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(digits) << x;
    return os.str();
}

inline std::string estimate_table(const ojson& j) {
    std::ostringstream os;
    const auto& c = j["config"];
    os << "Material " << j["material"]["name"].get<std::string>() << "  (eta = " << j["material"]["eta"]
       << ", N = " << c["planewaves"] << ", n_p = " << j["grid"]["n_p"] << ", "
       << j["material"]["lattice_class"].get<std::string>() << ", optimize = " << c["optimize"].get<std::string>()
       << ")\n\n";
    os << std::left << std::setw(12) << "group" << std::setw(52) << "row" << std::right << std::setw(14) << "Toffoli"
       << std::setw(14) << "depth" << "\n";
    for (const auto& r : j["rows"])
        os << std::left << std::setw(12) << r["group"].get<std::string>() << std::setw(52) << r["label"].get<std::string>()
           << std::right << std::setw(14) << r["toffoli"].get<std::int64_t>() << std::setw(14)
           << r["depth"].get<std::int64_t>() << "\n";
    const auto& t = j["totals"];
    os << "\nper step (2 PREP + SEL + reflection): " << t["cost"]["per_step"] << " Toffoli, " << t["depth"]["per_step"]
       << " depth\n";
    os << "lambda = " << sci(j["lambda"]["total"].get<double>()) << "   QPE iterations = " << t["iterations"] << "\n\n";
    os << "Toffoli count   " << sci(double(t["toffoli_count"].get<std::int64_t>())) << "\n";
    os << "Toffoli depth   " << sci(double(t["toffoli_depth"].get<std::int64_t>())) << "\n";
    os << "clean qubits    " << j["qubits"]["clean_total"] << "\n";
    os << "dirty qubits    " << j["qubits"]["dirty_max"] << "\n";
    os << "total qubits    " << j["qubits"]["grand_total"] << "\n";
    for (const auto& w : j["warnings"]) os << "warning: " << w.get<std::string>() << "\n";
    return os.str();
}

// ---- verify ----------------------------------------------------------------

inline ojson verify_json(const std::vector<verify::Suite>& suites, const InputFile& hgh_file) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = "verify";
    ojson arr = ojson::array();
    for (const auto& s : suites) {
        ojson checks = ojson::array();
        for (const auto& c : s.checks)
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"limit", c.limit}});
        arr.push_back({{"name", s.name}, {"passed", s.passed()}, {"failures", s.failures()}, {"checks", checks}});
    }
    j["suites"] = arr;
    j["passed"] = verify::all_passed(suites);
    j["provenance"] = provenance({{"hgh_table", &hgh_file}});
    return j;
}

inline std::string verify_table(const std::vector<verify::Suite>& suites) {
    std::ostringstream os;
    for (const auto& s : suites) {
        os << (s.passed() ? "PASS " : "FAIL ") << s.name << " (" << s.checks.size() << " checks, " << s.failures()
           << " failed)\n";
        for (const auto& c : s.checks)
            if (!c.passed) os << "  violated: " << c.name << "  value " << sci(c.value) << " limit " << sci(c.limit) << "\n";
    }
    return os.str();
}

// ---- energies --------------------------------------------------------------

// Relative stability of a phase with Li concentration x in [0, 2].
inline double formation_energy(double E_x, double E_full, double E_empty, double x) {
    return E_x - (x / 2) * E_full - (1 - x / 2) * E_empty;
}

// Energy to remove delta/2 O2 molecules' worth of oxygen from the pristine cell.
inline double o2_vacancy_energy(double E_defect, double E_pristine, double E_O2, double delta) {
    return E_defect - E_pristine + (delta / 2) * E_O2;
}

}  // namespace ppqe::cli
