#include <iostream>

#include <CLI11.hpp>

#include "ppqe/cli.hpp"

using namespace ppqe;

namespace {

int run_estimate(const cli::EstimateArgs& a, const std::string& format) {
    const auto res = cli::run_estimate(a);
    const auto j = cli::estimate_json(res, a);
    if (format == "table") std::cout << cli::estimate_table(j);
    else std::cout << j.dump(2) << "\n";
    return cli::kOk;
}

int run_verify(const std::string& hgh, const verify::Options& opt, const std::string& format) {
    const auto file = cli::read_input(cli::resolve_hgh_path(hgh));
    const auto table = hgh::parse_table(cli::parse_json(file));
    for (auto N : opt.grids)
        if (N < 1 || N > oracle::kMaxOracleN)
            throw InputError("--grid must lie in [1, " + std::to_string(oracle::kMaxOracleN) + "]");
    const auto suites = verify::run_all(table, opt);
    if (format == "table") std::cout << cli::verify_table(suites);
    else std::cout << cli::verify_json(suites, file).dump(2) << "\n";
    return verify::all_passed(suites) ? cli::kOk : cli::kVerificationFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fault-tolerant resource estimates for pseudopotential plane-wave phase estimation"};
    app.set_version_flag("--version", std::string(PPQE_VERSION));
    app.require_subcommand(1);

    std::string format = "json";
    const auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));
    };

    cli::EstimateArgs est;
    std::int64_t planewaves = 0, n_dirty = 0;
    auto* e = app.add_subcommand("estimate", "Toffoli count, Toffoli depth and qubits for one material");
    e->add_option("--material", est.material, "Material JSON file, or the name of a shipped material")->required();
    e->add_option("--hgh", est.hgh, "HGH parameter table (default: $PPQE_HGH_TABLE, then the shipped table)");
    auto* pw = e->add_option("--planewaves", planewaves, "Number of plane waves N (default: material default_N)");
    e->add_option("--error-ev", est.error_ev, "Target energy error in eV")->capture_default_str();
    e->add_option("--p-th", est.p_th, "Success-probability threshold for amplitude amplification")->capture_default_str();
    e->add_option("--optimize", est.optimize, "QROM plan objective")
        ->check(CLI::IsMember({"cost", "depth"}))
        ->capture_default_str();
    auto* nd = e->add_option("--n-dirty", n_dirty, "Available dirty qubits (default: material default_n_dirty)");
    e->add_option("--n-tof", est.n_tof, "Parallel Toffoli budget in depth mode")->capture_default_str();
    e->add_option("--b-r", est.b_r, "Rotation bits for nuclear-type preparation")->capture_default_str();
    e->add_option("--n-aa", est.n_aa, "Rotation bits for amplitude amplification")->capture_default_str();
    e->add_option("--n-b", est.n_b, "Phase-gradient register width")->capture_default_str();
    e->add_option("--kappa", est.kappa, "Parallel Toffolis per dirty-QROM block")->capture_default_str();
    add_format(e);

    std::string v_hgh;
    verify::Options vopt;
    std::vector<std::int64_t> grids;
    auto* v = app.add_subcommand("verify", "Check the LCU decompositions, closed forms and the QROM error lemma");
    v->add_option("--grid", grids, "Plane-wave count of the toy grids (repeatable, default 27)");
    v->add_option("--hgh", v_hgh, "HGH parameter table");
    v->add_option("--flip-nl-sign", vopt.flip_nl_sigma, "Self-test: negate one nonlocal coefficient")->group("");
    add_format(v);

    double E_x = 0, E_full = 0, E_empty = 0, x = 0;
    double E_def = 0, E_prist = 0, E_O2 = 0, delta = 0;
    auto* f = app.add_subcommand("formation-energy", "Formation or oxygen-vacancy energy from total energies (Hartree)");
    auto* fx = f->add_option("--e-x", E_x, "Energy of the intermediate phase Li_x");
    auto* ff = f->add_option("--e-full", E_full, "Energy of the fully lithiated phase (x = 2)");
    auto* fe = f->add_option("--e-empty", E_empty, "Energy of the delithiated phase (x = 0)");
    auto* fxx = f->add_option("--x", x, "Lithium concentration in [0, 2]")->check(CLI::Range(0.0, 2.0));
    auto* fd = f->add_option("--e-defect", E_def, "Energy of the cell with oxygen vacancies");
    auto* fp = f->add_option("--e-pristine", E_prist, "Energy of the pristine cell");
    auto* fo = f->add_option("--e-o2", E_O2, "Energy of an O2 molecule");
    auto* fdl = f->add_option("--delta", delta, "Number of removed oxygen atoms");
    for (auto* o : {fx, ff, fe, fxx}) o->excludes(fd)->excludes(fp)->excludes(fo)->excludes(fdl);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? 0 : cli::kInputError;
    }

    try {
        if (e->parsed()) {
            if (*pw) est.planewaves = planewaves;
            if (*nd) est.n_dirty = n_dirty;
            return run_estimate(est, format);
        }
        if (v->parsed()) {
            if (!grids.empty()) vopt.grids = grids;
            return run_verify(v_hgh, vopt, format);
        }
        if (f->parsed()) {
            cli::ojson j;
            j["schema_version"] = cli::kSchemaVersion;
            j["command"] = "formation-energy";
            if (*fx && *ff && *fe && *fxx) {
                j["kind"] = "formation";
                j["inputs"] = {{"E_x", E_x}, {"E_full", E_full}, {"E_empty", E_empty}, {"x", x}};
                j["energy_hartree"] = cli::formation_energy(E_x, E_full, E_empty, x);
            } else if (*fd && *fp && *fo && *fdl) {
                j["kind"] = "oxygen_vacancy";
                j["inputs"] = {{"E_defect", E_def}, {"E_pristine", E_prist}, {"E_O2", E_O2}, {"delta", delta}};
                j["energy_hartree"] = cli::o2_vacancy_energy(E_def, E_prist, E_O2, delta);
            } else {
                throw InputError("give either --e-x --e-full --e-empty --x, or --e-defect --e-pristine --e-o2 --delta");
            }
            j["energy_ev"] = hartree_to_ev(j["energy_hartree"].get<double>());
            std::cout << j.dump(2) << "\n";
            return cli::kOk;
        }
    } catch (const InputError& err) {
        std::cerr << "input error: " << err.what() << "\n";
        return cli::kInputError;
    } catch (const InfeasibleError& err) {
        std::cerr << "infeasible: " << err.what() << "\n";
        return cli::kInfeasible;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return cli::kInputError;
    }
    return cli::kInputError;
}
