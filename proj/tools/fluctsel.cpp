#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fluctsel/config.hpp"
#include "fluctsel/errors.hpp"
#include "fluctsel/experiments.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string tag_list() {
    std::string s;
    for (const auto& t : fluctsel::experiment_tags()) s += (s.empty() ? "" : ", ") + t;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic selection-mutation experiments"};
    app.set_version_flag("--version", std::string("fluctsel ") + FLUCTSEL_VERSION);
    std::string tag;
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
    app.add_option("experiment", tag, "Experiment tag: " + tag_list())->required();
    app.add_option("--config", config_path, "Run configuration file")->required();
    app.add_option("--out", out_dir, "Output directory (default: output.dir)");
    app.add_option("--override", overrides, "section.key=value, applied in order");
    CLI11_PARSE(app, argc, argv);

    try {
        fluctsel::RunConfig config = fluctsel::parse_config(config_path);
        for (const auto& o : overrides) fluctsel::apply_override(config, o);
        fluctsel::apply_override(config, "experiment.tag=" + tag);
        if (!out_dir.empty()) fluctsel::apply_override(config, "output.dir=" + out_dir);

        const fluctsel::ResultBundle bundle = fluctsel::run_experiment(config);
        fluctsel::emit_bundle(bundle, config.output.dir);
        std::cout << bundle.summary.dump(2) << "\n";
        std::cerr << "wrote " << config.output.dir << " (" << bundle.elapsed_seconds << " s)\n";
        return 0;
    } catch (const fluctsel::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const fluctsel::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const fluctsel::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
