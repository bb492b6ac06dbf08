#include <fractex/best_basis.hpp>
#include <fractex/classifier.hpp>
#include <fractex/dataset.hpp>
#include <fractex/errors.hpp>
#include <fractex/fbm.hpp>
#include <fractex/fractal.hpp>
#include <fractex/glcm.hpp>
#include <fractex/morphology.hpp>
#include <fractex/pgm.hpp>
#include <fractex/pipeline.hpp>
#include <fractex/version.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;
using namespace fractex;

std::optional<double> parse_noise_cutoff(const std::string& value) {
    if (value == "off") return std::nullopt;
    if (value == "on") return kDefaultNoiseCutoff;
    try {
        size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw PreconditionError("--noise-cutoff expects off, on or a number, got '" + value +
                                "'");
    }
}

FeatureMode parse_mode(const std::string& value) {
    if (value == "selected_only") return FeatureMode::kSelectedOnly;
    if (value == "all_four") return FeatureMode::kAllFour;
    throw PreconditionError("--mode expects selected_only or all_four, got '" + value + "'");
}

SelectionCriterion parse_criterion(const std::string& value) {
    if (value == "fd") return SelectionCriterion::kFractalDimension;
    if (value == "energy") return SelectionCriterion::kEnergy;
    throw PreconditionError("--criterion expects fd or energy, got '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : value + ",") {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (ch != ' ') {
            cur += ch;
        }
    }
    return out;
}

void write_or_print(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::fputs(content.c_str(), stdout);
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + out_path);
    out << content;
    if (!out) throw IoError("failed writing " + out_path);
}

struct SynthArgs {
    std::string classes;
    int per_class = 10;
    int size = 128;
    uint64_t seed = 0;
    std::string out;
};

void cmd_synth(const SynthArgs& args) {
    const std::vector<std::string> tokens = split_list(args.classes);
    if (tokens.empty()) throw PreconditionError("--classes lists no values");
    std::vector<double> hursts;
    for (const std::string& t : tokens) {
        double h = 0.0;
        try {
            size_t pos = 0;
            h = std::stod(t, &pos);
            if (pos != t.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw PreconditionError("--classes: bad Hurst value '" + t + "'");
        }
        if (!(h > 0.0 && h < 1.0)) {
            throw PreconditionError("--classes: Hurst value " + t + " outside (0, 1)");
        }
        hursts.push_back(h);
    }
    if (args.per_class < 1) throw PreconditionError("--per-class must be >= 1");
    if (args.size < 8) throw PreconditionError("--size must be >= 8");

    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);

    std::vector<ManifestEntry> entries;
    uint64_t index = 0;
    for (size_t c = 0; c < hursts.size(); ++c) {
        const std::string label = "H" + tokens[c];
        for (int i = 0; i < args.per_class; ++i, ++index) {
            const uint64_t seed = args.seed + index;
            const GrayImage img = synth_fbm(args.size, args.size, hursts[c], seed);
            char name[64];
            std::snprintf(name, sizeof(name), "fbm_%s_%03d.pgm", label.c_str(), i);
            write_pgm_file(img, out_dir / name, 65535);
            entries.push_back(
                {name, label, fbm_descriptor(tokens[c], seed, args.size, args.size)});
        }
    }
    write_manifest(out_dir / "manifest.csv", entries);
    std::printf("wrote %zu images and manifest.csv under %s\n", entries.size(),
                out_dir.string().c_str());
}

struct DecomposeArgs {
    std::string image;
    std::string criterion = "fd";
    int max_level = 3;
    double lambda = 0.0;
    std::string noise_cutoff = "off";
    int fd_max_distance = 0;
    bool preprocess_gradient = false;
    std::string dump_dir;
    std::string out;
};

void cmd_decompose(const DecomposeArgs& args) {
    GrayImage img = load_pgm_file(args.image);
    if (args.preprocess_gradient) img = morphological_gradient(img);

    BestBasisOptions options;
    options.max_level = args.max_level;
    options.lambda = args.lambda;
    options.noise_cutoff = parse_noise_cutoff(args.noise_cutoff);
    options.fd_max_distance = args.fd_max_distance;
    const SelectionCriterion criterion = parse_criterion(args.criterion);

    DecompositionTrace trace;
    try {
        if (args.dump_dir.empty()) {
            trace = select_best_basis(img, criterion, options);
        } else {
            const fs::path dump(args.dump_dir);
            fs::create_directories(dump);
            const std::string stem = fs::path(args.image).stem().string();
            LevelObserver observer = [&dump, &stem](const SubbandSet& sub, const LevelScores&) {
                dump_subbands(sub, dump, stem);
            };
            SubbandScorer scorer;
            if (criterion == SelectionCriterion::kFractalDimension) {
                const int dist = options.fd_max_distance;
                scorer = [dist](const GrayImage& band, int, Quadrant) {
                    const int d = dist > 0 ? dist : default_fd_distance(band);
                    return estimate_fd(band, d).fd;
                };
            } else {
                scorer = [](const GrayImage& band, int, Quadrant) {
                    return subband_energy(band);
                };
            }
            trace = select_best_basis_with(img, db8_filters(), scorer, options, criterion,
                                           observer);
        }
    } catch (const DegenerateSurfaceError& e) {
        throw DegenerateSurfaceError(std::string(e.what()) + " (image " + args.image + ")");
    }
    write_or_print(args.out, trace_report(trace));
}

struct ExtractArgs {
    std::string manifest;
    std::string method = "bbs_fd";
    int max_level = 3;
    double lambda = 0.0;
    std::string mode = "selected_only";
    std::string noise_cutoff = "off";
    int glcm_levels = 16;
    int glcm_distance = 1;
    int fd_max_distance = 0;
    int workers = 0;
    bool preprocess_gradient = false;
    std::string out;
};

void cmd_extract(const ExtractArgs& args) {
    ExtractOptions options;
    options.method = method_from_string(args.method);
    options.max_level = args.max_level;
    options.lambda = args.lambda;
    options.mode = parse_mode(args.mode);
    options.noise_cutoff = parse_noise_cutoff(args.noise_cutoff);
    options.glcm.levels = args.glcm_levels;
    options.glcm.distance = args.glcm_distance;
    options.fd_max_distance = args.fd_max_distance;
    options.preprocess_gradient = args.preprocess_gradient;
    if (args.max_level < 1 || args.max_level > 8) {
        throw PreconditionError("--max-level must be in 1..8");
    }
    if (args.lambda < 0.0) throw PreconditionError("--lambda must be >= 0");

    const std::vector<ImageRecord> records = load_manifest_images(args.manifest);
    const FeatureTable table = extract_features(records, options, args.workers);
    write_feature_csv(args.out, table);
    std::printf("wrote %zu feature rows to %s\n", table.rows.size(), args.out.c_str());
}

struct LoocvArgs {
    std::string features;
    std::string out;
};

void cmd_loocv(const LoocvArgs& args) {
    const FeatureTable table = read_feature_csv(args.features);
    const ClassificationReport report = loocv(table.rows);
    validate_report(report);
    std::fputs(report_to_text(report).c_str(), stdout);
    if (!args.out.empty()) {
        ConfigEcho echo;
        echo["features_csv"] = args.features;
        write_or_print(args.out, report_to_json(report, echo));
    }
}

void cmd_bench(const std::string& config_path) {
    const RunConfig config = parse_run_config(config_path);
    run_bench(config);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractal-dimension-guided wavelet packet texture analysis"};
    app.set_version_flag("--version", std::string("fractex ") + kVersion);
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "generate a labeled fBm PGM dataset");
    synth_cmd->add_option("--classes", synth.classes, "comma-separated Hurst values, one class each")
        ->required();
    synth_cmd->add_option("--per-class", synth.per_class, "images per class (default 10)");
    synth_cmd->add_option("--size", synth.size, "square image size in pixels (default 128)");
    synth_cmd->add_option("--seed", synth.seed, "master seed (default 0)");
    synth_cmd->add_option("--out", synth.out, "output directory")->required();
    synth_cmd->callback([&synth] { cmd_synth(synth); });

    DecomposeArgs dec;
    CLI::App* dec_cmd = app.add_subcommand("decompose", "best-basis trace report for one image");
    dec_cmd->add_option("--image", dec.image, "input PGM image")->required();
    dec_cmd->add_option("--criterion", dec.criterion, "fd or energy (default fd)");
    dec_cmd->add_option("--max-level", dec.max_level, "depth cap 1..8 (default 3)");
    dec_cmd->add_option("--lambda", dec.lambda, "termination threshold (default 0)");
    dec_cmd->add_option("--noise-cutoff", dec.noise_cutoff, "off, on or a value (default off)");
    dec_cmd->add_option("--fd-max-distance", dec.fd_max_distance,
                        "FD pair distance cap, 0 = auto");
    dec_cmd->add_flag("--gradient", dec.preprocess_gradient, "morphological gradient preprocess");
    dec_cmd->add_option("--dump-subbands", dec.dump_dir, "write per-level subband PGMs here");
    dec_cmd->add_option("--out", dec.out, "report file (default: stdout)");
    dec_cmd->callback([&dec] { cmd_decompose(dec); });

    ExtractArgs ext;
    CLI::App* ext_cmd = app.add_subcommand("extract", "feature CSV for a dataset manifest");
    ext_cmd->add_option("--manifest", ext.manifest, "dataset manifest")->required();
    ext_cmd->add_option("--method", ext.method, "bbs_fd, bbs_e or bbs_cm (default bbs_fd)");
    ext_cmd->add_option("--max-level", ext.max_level, "depth cap 1..8 (default 3)");
    ext_cmd->add_option("--lambda", ext.lambda, "termination threshold (default 0)");
    ext_cmd->add_option("--mode", ext.mode, "selected_only or all_four (default selected_only)");
    ext_cmd->add_option("--noise-cutoff", ext.noise_cutoff, "off, on or a value (default off)");
    ext_cmd->add_option("--glcm-levels", ext.glcm_levels, "co-occurrence bins (default 16)");
    ext_cmd->add_option("--glcm-distance", ext.glcm_distance, "co-occurrence distance (default 1)");
    ext_cmd->add_option("--fd-max-distance", ext.fd_max_distance,
                        "FD pair distance cap, 0 = auto");
    ext_cmd->add_option("--workers", ext.workers, "worker threads, 0 = hardware (default 0)");
    ext_cmd->add_flag("--gradient", ext.preprocess_gradient, "morphological gradient preprocess");
    ext_cmd->add_option("--out", ext.out, "output feature CSV")->required();
    ext_cmd->callback([&ext] { cmd_extract(ext); });

    LoocvArgs lv;
    CLI::App* lv_cmd = app.add_subcommand("loocv", "leave-one-out evaluation of a feature CSV");
    lv_cmd->add_option("--features", lv.features, "feature CSV from extract")->required();
    lv_cmd->add_option("--out", lv.out, "JSON report file (default: text to stdout only)");
    lv_cmd->callback([&lv] { cmd_loocv(lv); });

    std::string bench_config;
    CLI::App* bench_cmd = app.add_subcommand("bench", "full method comparison from a config file");
    bench_cmd->add_option("--config", bench_config, "key = value run configuration")->required();
    bench_cmd->callback([&bench_config] { cmd_bench(bench_config); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "fractex: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "fractex: error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fractex: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
