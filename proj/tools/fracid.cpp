#include "fracid/app/commands.hpp"
#include "fracid/errors.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace fracid;
using namespace fracid::app;

namespace {

ModelRef model_ref(const std::string& file, const std::string& fixture) {
    ModelRef r;
    if (!file.empty()) r.file = file;
    if (!fixture.empty()) r.fixture = fixture;
    return r;
}

std::vector<ModelRef> plant_refs(const std::vector<std::string>& files) {
    std::vector<ModelRef> out;
    for (const auto& f : files) {
        if (f.rfind("fixture:", 0) == 0) out.push_back(model_ref("", f.substr(8)));
        else out.push_back(model_ref(f, ""));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fractional-order identification, analysis and control of reactor step-back models"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory (overrides the config)");
    app.add_option("--seed", seed, "random seed (overrides the config)");

    // identify-discrete
    auto* idd = app.add_subcommand("identify-discrete", "fit ARX/ARMAX/OE/BJ candidates and rank them by AIC");
    std::string idd_data, idd_fixture;
    std::vector<std::string> idd_specs;
    double idd_noise = 0.0;
    idd->add_option("--data", idd_data, "time-series CSV (t,u,y)");
    idd->add_option("--fixture", idd_fixture, "regenerate a step-back record from a discrete fixture");
    idd->add_option("--noise", idd_noise, "output noise sigma for regenerated records");
    idd->add_option("--spec", idd_specs, "candidate, e.g. arx:na=2,nb=2,nk=1 (repeatable)");

    // freqresp
    auto* fr = app.add_subcommand("freqresp", "sample a model's frequency response on the configured grid");
    std::string fr_model, fr_fixture;
    fr->add_option("--model", fr_model, "model JSON");
    fr->add_option("--fixture", fr_fixture, "fixture label (discrete by default, prefix fo: for fractional)");

    // identify-fo
    auto* idf = app.add_subcommand("identify-fo", "Levy identification over a commensurate-order sweep");
    std::string idf_data, idf_fixture, idf_q, idf_weight;
    bool idf_self = false;
    idf->add_option("--data", idf_data, "frequency-response CSV (omega,re,im)");
    idf->add_option("--fixture", idf_fixture, "discrete fixture to sample");
    idf->add_option("--q", idf_q, "comma separated orders, e.g. 1,1/2,1/4");
    idf->add_option("--weighting", idf_weight, "uniform or vinagre (default both)");
    idf->add_flag("--self-test", idf_self, "fit random in-class models and require J < 1e-10");

    // analyze
    auto* an = app.add_subcommand("analyze", "w-plane poles, damping classes and pole-zero map");
    std::string an_model, an_fixture;
    an->add_option("--model", an_model, "fractional model JSON");
    an->add_option("--fixture", an_fixture, "fractional fixture label");

    // tune
    auto* tu = app.add_subcommand("tune", "tune the continuous-order controller for hyper-damping");
    std::vector<std::string> tu_plants;
    tu->add_option("--plant", tu_plants, "plant JSON or fixture:<label> (default: all eight fixtures)");

    // verify
    auto* ve = app.add_subcommand("verify", "closed-loop pole report for a fixed controller");
    std::string ve_ctrl = "", ve_ctrl_fixture = "";
    std::vector<std::string> ve_plants;
    ve->add_option("--controller", ve_ctrl, "controller JSON");
    ve->add_option("--controller-fixture", ve_ctrl_fixture, "'published' for the fixture controller");
    ve->add_option("--plant", ve_plants, "plant JSON or fixture:<label> (default: all eight fixtures)");

    // simulate
    auto* si = app.add_subcommand("simulate", "closed-loop step or disturbance simulation");
    std::string si_plant, si_plant_fixture, si_ctrl, si_ctrl_fixture, si_scenario = "track";
    double si_amp = 1.0;
    si->add_option("--plant", si_plant, "plant JSON");
    si->add_option("--plant-fixture", si_plant_fixture, "fractional fixture label");
    si->add_option("--controller", si_ctrl, "controller JSON");
    si->add_option("--controller-fixture", si_ctrl_fixture, "'published' for the fixture controller");
    si->add_option("--scenario", si_scenario, "track or disturb")->check(CLI::IsMember({"track", "disturb"}));
    si->add_option("--amplitude", si_amp, "reference or disturbance step height");

    // report
    auto* re = app.add_subcommand("report", "full reproduction bundle with a pass/fail summary");
    std::string re_fixtures;
    bool re_tune = false;
    re->add_option("--fixtures", re_fixtures, "fixture directory written by export-fixtures");
    re->add_flag("--tune", re_tune, "also run the re-tuning check");

    auto* ex = app.add_subcommand("export-fixtures", "write the built-in fixtures as JSON files");

    auto* rg = app.add_subcommand("regenerate", "synthesise a step-back record from a discrete fixture");
    std::string rg_fixture;
    double rg_drop = 0.0, rg_noise = 0.0, rg_duration = 14.0;
    rg->add_option("--fixture", rg_fixture, "discrete fixture label")->required();
    rg->add_option("--drop", rg_drop, "step height (default: the fixture's drop fraction)");
    rg->add_option("--noise", rg_noise, "output noise sigma");
    rg->add_option("--duration", rg_duration, "record length in seconds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (!out_dir.empty()) cfg.out = out_dir;
        if (seed) cfg.seed = *seed;
        cfg.validate();

        Output o;
        if (*idd) {
            IdentifyDiscreteArgs a;
            if (!idd_data.empty()) a.data = idd_data;
            if (!idd_fixture.empty()) a.fixture = idd_fixture;
            a.noise_sigma = idd_noise;
            a.specs = idd_specs;
            o = cmd_identify_discrete(cfg, a);
        } else if (*fr) {
            o = cmd_freqresp(cfg, model_ref(fr_model, fr_fixture));
        } else if (*idf) {
            IdentifyFoArgs a;
            if (!idf_data.empty()) a.data = idf_data;
            if (!idf_fixture.empty()) a.fixture = idf_fixture;
            if (!idf_q.empty()) a.q_list = parse_q_list(idf_q);
            if (!idf_weight.empty()) a.weighting = sysid::parse_weighting(idf_weight);
            a.self_test = idf_self;
            o = cmd_identify_fo(cfg, a);
        } else if (*an) {
            o = cmd_analyze(cfg, model_ref(an_model, an_fixture));
        } else if (*tu) {
            o = cmd_tune(cfg, plant_refs(tu_plants));
        } else if (*ve) {
            o = cmd_verify(cfg, model_ref(ve_ctrl, ve_ctrl_fixture), plant_refs(ve_plants));
        } else if (*si) {
            SimulateArgs a;
            a.plant = model_ref(si_plant, si_plant_fixture);
            a.controller = model_ref(si_ctrl, si_ctrl_fixture);
            a.scenario = si_scenario == "track" ? Scenario::Track : Scenario::Disturb;
            a.amplitude = si_amp;
            o = cmd_simulate(cfg, a);
        } else if (*re) {
            ReportArgs a;
            if (!re_fixtures.empty()) a.fixtures_dir = re_fixtures;
            a.tune = re_tune;
            o = cmd_report(cfg, a);
        } else if (*ex) {
            o = cmd_export_fixtures(cfg);
        } else if (*rg) {
            o = cmd_regenerate(cfg, {rg_fixture, rg_drop, rg_noise, rg_duration});
        }
        commit(o, cfg.out);
        std::cout << o.summary;
        return o.exit_code;
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
}
