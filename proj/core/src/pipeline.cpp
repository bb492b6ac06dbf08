#include <fractex/pipeline.hpp>

#include <fractex/errors.hpp>
#include <fractex/fractal.hpp>
#include <fractex/glcm.hpp>
#include <fractex/morphology.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

namespace fractex {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_fixed6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// Everything a run needs from one image, computed once per (image, method):
// the full lambda = 0 trace to max_level, plus per-level co-occurrence
// features of all four subbands when the method consumes them.
struct ImageLevelData {
    DecompositionTrace trace;
    std::vector<std::array<GlcmFeatures, 4>> glcm; // per level, quadrant order
};

SubbandScorer make_scorer(Method method, const ExtractOptions& options) {
    if (method == Method::kBbsFd) {
        const int dist = options.fd_max_distance;
        return [dist](const GrayImage& band, int, Quadrant) {
            const int d = dist > 0 ? dist : default_fd_distance(band);
            return estimate_fd(band, d).fd;
        };
    }
    return [](const GrayImage& band, int, Quadrant) { return subband_energy(band); };
}

ImageLevelData compute_level_data(const GrayImage& image, const ExtractOptions& options) {
    const GrayImage* input = &image;
    GrayImage preprocessed(1, 1);
    if (options.preprocess_gradient) {
        preprocessed = morphological_gradient(image);
        input = &preprocessed;
    }

    BestBasisOptions bb;
    bb.max_level = options.max_level;
    bb.lambda = 0.0;
    bb.noise_cutoff = std::nullopt;
    bb.fd_max_distance = options.fd_max_distance;

    const SelectionCriterion tag = options.method == Method::kBbsFd
                                       ? SelectionCriterion::kFractalDimension
                                       : SelectionCriterion::kEnergy;

    ImageLevelData data;
    LevelObserver observer;
    if (options.method == Method::kBbsCm) {
        observer = [&data, &options](const SubbandSet& sub, const LevelScores&) {
            std::array<GlcmFeatures, 4> per_quadrant;
            for (int i = 0; i < 4; ++i) {
                const GrayImage scaled = rescale_unit(sub.band(kQuadrants[static_cast<size_t>(i)]));
                per_quadrant[static_cast<size_t>(i)] =
                    glcm_features_mean(scaled, options.glcm.levels, options.glcm.distance);
            }
            data.glcm.push_back(per_quadrant);
        };
    }
    data.trace = select_best_basis_with(*input, db8_filters(), make_scorer(options.method, options),
                                        bb, tag, observer);
    return data;
}

void append_level_features(const ImageLevelData& data, int level_index, Method method,
                           FeatureMode mode, FeatureVector& fv) {
    const LevelScores& ls = data.trace.levels[static_cast<size_t>(level_index)];
    const std::string prefix = (method == Method::kBbsCm ? std::string("cm") : std::string(
                                    to_string(data.trace.criterion))) +
                               "_L" + std::to_string(ls.level);
    if (method == Method::kBbsCm) {
        const auto& per_quadrant = data.glcm[static_cast<size_t>(level_index)];
        auto push = [&fv](const std::string& stem, const GlcmFeatures& f) {
            fv.values.push_back(f.correlation);
            fv.names.push_back(stem + "_corr");
            fv.values.push_back(f.entropy);
            fv.names.push_back(stem + "_entropy");
            fv.values.push_back(f.energy);
            fv.names.push_back(stem + "_energy");
        };
        if (mode == FeatureMode::kSelectedOnly) {
            push(prefix + "_sel", per_quadrant[static_cast<size_t>(ls.selected)]);
        } else {
            for (int i = 0; i < 4; ++i) {
                push(prefix + "_" + to_string(kQuadrants[static_cast<size_t>(i)]),
                     per_quadrant[static_cast<size_t>(i)]);
            }
        }
        return;
    }
    if (mode == FeatureMode::kSelectedOnly) {
        fv.values.push_back(ls.score(ls.selected));
        fv.names.push_back(prefix + "_sel");
    } else {
        for (Quadrant q : kQuadrants) {
            fv.values.push_back(ls.score(q));
            fv.names.push_back(prefix + "_" + to_string(q));
        }
    }
}

FeatureVector assemble_fixed(const ImageLevelData& data, int depth, Method method,
                             FeatureMode mode) {
    FeatureVector fv;
    for (int i = 0; i < depth; ++i) {
        append_level_features(data, i, method, mode, fv);
    }
    return fv;
}

// Variable-depth runs pad every vector to the run's maximum depth by
// repeating the final included level, and append the realized depth as a
// feature of its own. A depth-0 trace (level 1 already under threshold)
// contributes its level-1 values with depth recorded as 0.
FeatureVector assemble_padded(const ImageLevelData& data, int depth, int run_depth, Method method,
                              FeatureMode mode) {
    const int base = std::max(depth, 1);
    FeatureVector fv;
    for (int i = 0; i < run_depth; ++i) {
        append_level_features(data, std::min(i, base - 1), method, mode, fv);
    }
    // Padded copies must keep positional names; rebuild them from the
    // level numbers 1..run_depth.
    const size_t per_level = fv.names.size() / static_cast<size_t>(run_depth);
    for (int i = 0; i < run_depth; ++i) {
        const std::string want = "_L" + std::to_string(i + 1) + "_";
        for (size_t j = 0; j < per_level; ++j) {
            std::string& name = fv.names[static_cast<size_t>(i) * per_level + j];
            const size_t pos = name.find("_L");
            const size_t end = name.find('_', pos + 2);
            name = name.substr(0, pos) + "_L" + std::to_string(i + 1) + name.substr(end);
        }
    }
    fv.values.push_back(static_cast<double>(depth));
    fv.names.push_back("depth");
    return fv;
}

void parallel_map(size_t n, int workers,
                  const std::function<void(size_t)>& fn,
                  const std::function<std::string(size_t)>& context) {
    std::vector<std::exception_ptr> errors(n);
    if (workers <= 1) {
        for (size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
                break;
            }
        }
    } else {
        std::atomic<size_t> next{0};
        auto body = [&] {
            for (;;) {
                const size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        const int count = static_cast<int>(std::min(static_cast<size_t>(workers), n));
        pool.reserve(static_cast<size_t>(count));
        for (int t = 0; t < count; ++t) pool.emplace_back(body);
        for (std::thread& t : pool) t.join();
    }
    for (size_t i = 0; i < n; ++i) {
        if (!errors[i]) continue;
        const std::string ctx = context(i);
        try {
            std::rethrow_exception(errors[i]);
        } catch (const PreconditionError& e) {
            throw PreconditionError(ctx + e.what());
        } catch (const DegenerateSurfaceError& e) {
            throw DegenerateSurfaceError(ctx + e.what());
        } catch (const IoError& e) {
            throw IoError(ctx + e.what());
        } catch (const std::exception& e) {
            throw Error(ctx + e.what());
        }
    }
}

std::vector<ImageLevelData> compute_all(std::span<const ImageRecord> records,
                                        const ExtractOptions& options, int workers) {
    std::vector<ImageLevelData> data(records.size());
    parallel_map(
        records.size(), workers,
        [&](size_t i) { data[i] = compute_level_data(records[i].image, options); },
        [&](size_t i) { return "extracting " + records[i].source + ": "; });
    return data;
}

FeatureTable assemble_table(std::span<const ImageRecord> records,
                            std::span<const ImageLevelData> data, const ExtractOptions& options) {
    const bool variable = options.lambda > 0.0 || options.noise_cutoff.has_value();
    std::vector<int> depths(records.size(), options.max_level);
    int run_depth = options.max_level;
    if (variable) {
        run_depth = 1;
        for (size_t i = 0; i < data.size(); ++i) {
            const DecompositionTrace t =
                truncate_trace(data[i].trace, options.lambda, options.noise_cutoff);
            depths[i] = t.depth;
            run_depth = std::max(run_depth, std::max(t.depth, 1));
        }
    }

    FeatureTable table;
    for (size_t i = 0; i < records.size(); ++i) {
        FeatureVector fv = variable
                               ? assemble_padded(data[i], depths[i], run_depth, options.method,
                                                 options.mode)
                               : assemble_fixed(data[i], options.max_level, options.method,
                                                options.mode);
        fv.label = records[i].label;
        if (i == 0) table.names = fv.names;
        table.rows.push_back(std::move(fv));
        table.sources.push_back(records[i].source);
    }
    return table;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("failed writing " + path.string());
}

ConfigEcho base_echo(const RunConfig& config) {
    ConfigEcho echo;
    echo["manifest"] = config.manifest.string();
    echo["max_level"] = std::to_string(config.max_level);
    echo["lambda"] = format_double(config.lambda);
    echo["mode"] = to_string(config.mode);
    echo["noise_cutoff"] =
        config.noise_cutoff ? format_double(*config.noise_cutoff) : std::string("off");
    echo["glcm_levels"] = std::to_string(config.glcm.levels);
    echo["glcm_distance"] = std::to_string(config.glcm.distance);
    echo["fd_max_distance"] = std::to_string(config.fd_max_distance);
    echo["seed"] = std::to_string(config.seed);
    echo["preprocess"] = config.preprocess_gradient ? "gradient" : "none";
    return echo;
}

int resolve_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

} // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::kBbsFd: return "bbs_fd";
        case Method::kBbsE: return "bbs_e";
        case Method::kBbsCm: return "bbs_cm";
    }
    throw Error("to_string(Method): invalid value");
}

Method method_from_string(const std::string& name) {
    std::string n = name;
    std::transform(n.begin(), n.end(), n.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (n == "bbs_fd") return Method::kBbsFd;
    if (n == "bbs_e") return Method::kBbsE;
    if (n == "bbs_cm") return Method::kBbsCm;
    throw PreconditionError("unknown method: " + name +
                            " (expected bbs_fd, bbs_e or bbs_cm)");
}

FeatureTable extract_features(std::span<const ImageRecord> records,
                              const ExtractOptions& options, int workers) {
    if (records.empty()) throw PreconditionError("extract_features: no images");
    const std::vector<ImageLevelData> data =
        compute_all(records, options, resolve_workers(workers));
    return assemble_table(records, data, options);
}

RunConfig parse_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path.string());
    const std::filesystem::path dir = path.parent_path();

    RunConfig config;
    bool have_manifest = false;
    bool have_out = false;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto fail = [&](const std::string& msg) {
            throw PreconditionError("config " + path.string() + " line " +
                                    std::to_string(line_no) + ": " + msg);
        };
        std::string s = line;
        if (const auto hash = s.find('#'); hash != std::string::npos) s.resize(hash);
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        auto strip = [](std::string v) {
            const auto b = v.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const auto e = v.find_last_not_of(" \t\r");
            return v.substr(b, e - b + 1);
        };
        const std::string key = strip(s.substr(0, eq));
        const std::string value = strip(s.substr(eq + 1));
        if (key.empty() || value.empty()) fail("empty key or value");

        auto parse_int = [&](int lo, int hi) {
            int v = 0;
            try {
                size_t pos = 0;
                v = std::stoi(value, &pos);
                if (pos != value.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail("'" + key + "' expects an integer");
            }
            if (v < lo || v > hi) {
                fail("'" + key + "' must be in " + std::to_string(lo) + ".." + std::to_string(hi));
            }
            return v;
        };
        auto parse_real = [&] {
            try {
                size_t pos = 0;
                const double v = std::stod(value, &pos);
                if (pos != value.size()) throw std::invalid_argument("");
                return v;
            } catch (const std::exception&) {
                fail("'" + key + "' expects a number");
            }
            return 0.0;
        };

        if (key == "manifest") {
            std::filesystem::path p(value);
            config.manifest = p.is_absolute() ? p : dir / p;
            have_manifest = true;
        } else if (key == "out_dir") {
            std::filesystem::path p(value);
            config.out_dir = p.is_absolute() ? p : dir / p;
            have_out = true;
        } else if (key == "methods") {
            config.methods.clear();
            std::string cur;
            for (char ch : value + ",") {
                if (ch == ',') {
                    const std::string tok = strip(cur);
                    if (!tok.empty()) config.methods.push_back(method_from_string(tok));
                    cur.clear();
                } else {
                    cur += ch;
                }
            }
            if (config.methods.empty()) fail("'methods' lists no methods");
        } else if (key == "max_level") {
            config.max_level = parse_int(1, 8);
        } else if (key == "lambda") {
            config.lambda = parse_real();
            if (config.lambda < 0.0) fail("'lambda' must be >= 0");
        } else if (key == "mode") {
            if (value == "selected_only") {
                config.mode = FeatureMode::kSelectedOnly;
            } else if (value == "all_four") {
                config.mode = FeatureMode::kAllFour;
            } else {
                fail("'mode' must be selected_only or all_four");
            }
        } else if (key == "noise_cutoff") {
            if (value == "off") {
                config.noise_cutoff = std::nullopt;
            } else if (value == "on") {
                config.noise_cutoff = kDefaultNoiseCutoff;
            } else {
                config.noise_cutoff = parse_real();
            }
        } else if (key == "glcm_levels") {
            config.glcm.levels = parse_int(2, 256);
        } else if (key == "glcm_distance") {
            config.glcm.distance = parse_int(1, 1 << 20);
        } else if (key == "fd_max_distance") {
            config.fd_max_distance = parse_int(0, 1 << 20);
        } else if (key == "seed") {
            try {
                size_t pos = 0;
                config.seed = std::stoull(value, &pos);
                if (pos != value.size()) throw std::invalid_argument("");
            } catch (const std::exception&) {
                fail("'seed' expects an unsigned integer");
            }
        } else if (key == "workers") {
            config.workers = parse_int(0, 1024);
        } else if (key == "preprocess") {
            if (value == "none") {
                config.preprocess_gradient = false;
            } else if (value == "gradient") {
                config.preprocess_gradient = true;
            } else {
                fail("'preprocess' must be none or gradient");
            }
        } else {
            fail("unknown key '" + key + "'");
        }
    }
    if (!have_manifest) throw PreconditionError("config " + path.string() + ": missing 'manifest'");
    if (!have_out) throw PreconditionError("config " + path.string() + ": missing 'out_dir'");
    return config;
}

BenchResult run_bench(const RunConfig& config) {
    const std::vector<ImageRecord> records = load_manifest_images(config.manifest);
    if (records.empty()) {
        throw PreconditionError("run_bench: manifest lists no images: " +
                                config.manifest.string());
    }
    std::map<std::string, int> per_class;
    for (const ImageRecord& r : records) per_class[r.label] += 1;
    if (per_class.size() < 2) {
        throw PreconditionError("run_bench: need at least 2 classes, got " +
                                std::to_string(per_class.size()));
    }
    for (const auto& [label, count] : per_class) {
        if (count < 4) {
            throw PreconditionError("run_bench: class '" + label + "' has " +
                                    std::to_string(count) + " images, need at least 4");
        }
    }
    if (config.methods.empty()) {
        throw PreconditionError("run_bench: no methods configured");
    }

    std::filesystem::create_directories(config.out_dir);
    const int workers = resolve_workers(config.workers);
    const ConfigEcho echo = base_echo(config);

    BenchResult result;
    nlohmann::ordered_json summary_methods = nlohmann::ordered_json::object();
    for (const Method method : config.methods) {
        const auto t0 = std::chrono::steady_clock::now();
        const std::string tag = to_string(method);

        ExtractOptions options;
        options.method = method;
        options.max_level = config.max_level;
        options.lambda = 0.0;
        options.mode = config.mode;
        options.noise_cutoff = std::nullopt;
        options.glcm = config.glcm;
        options.fd_max_distance = config.fd_max_distance;
        options.preprocess_gradient = config.preprocess_gradient;

        const std::vector<ImageLevelData> data = compute_all(records, options, workers);

        MethodResult mr;
        mr.method = method;
        std::vector<std::string> classes;
        for (int level = 1; level <= config.max_level; ++level) {
            ExtractOptions level_options = options;
            level_options.max_level = level;
            const FeatureTable table = assemble_table(records, data, level_options);
            write_feature_csv(config.out_dir / ("features_" + tag + "_L" +
                                                std::to_string(level) + ".csv"),
                              table);
            const ClassificationReport report = loocv(table.rows);
            validate_report(report);
            classes = report.classes;

            ConfigEcho level_echo = echo;
            level_echo["method"] = tag;
            level_echo["run"] = "fixed_level_" + std::to_string(level);
            level_echo["lambda"] = format_double(0.0);
            write_text_file(config.out_dir / ("report_" + tag + "_L" + std::to_string(level) +
                                              ".json"),
                            report_to_json(report, level_echo));
            mr.per_level.push_back(report);
            if (level == 1 || report.overall_accuracy > mr.best_accuracy) {
                mr.best_accuracy = report.overall_accuracy;
                mr.best_level = level;
            }
        }

        ExtractOptions threshold_options = options;
        threshold_options.lambda = config.lambda;
        threshold_options.noise_cutoff = config.noise_cutoff;
        const FeatureTable threshold_table = assemble_table(records, data, threshold_options);
        write_feature_csv(config.out_dir / ("features_" + tag + "_threshold.csv"),
                          threshold_table);
        mr.threshold_report = loocv(threshold_table.rows);
        validate_report(mr.threshold_report);
        for (size_t i = 0; i < records.size(); ++i) {
            const DecompositionTrace t =
                truncate_trace(data[i].trace, config.lambda, config.noise_cutoff);
            mr.threshold_max_depth = std::max(mr.threshold_max_depth, t.depth);
        }
        ConfigEcho threshold_echo = echo;
        threshold_echo["method"] = tag;
        threshold_echo["run"] = "threshold";
        write_text_file(config.out_dir / ("report_" + tag + "_threshold.json"),
                        report_to_json(mr.threshold_report, threshold_echo));

        std::string curve = "level";
        for (const std::string& c : classes) curve += "," + c;
        curve += ",overall\n";
        for (int level = 1; level <= config.max_level; ++level) {
            const ClassificationReport& report = mr.per_level[static_cast<size_t>(level - 1)];
            curve += std::to_string(level);
            for (double acc : report.per_class_accuracy) curve += "," + format_fixed6(acc);
            curve += "," + format_fixed6(report.overall_accuracy) + "\n";
        }
        write_text_file(config.out_dir / ("accuracy_vs_level_" + tag + ".csv"), curve);

        mr.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("bench: %s levels 1..%d done in %.2f s (best level %d, accuracy %.4f)\n",
                    tag.c_str(), config.max_level, mr.seconds, mr.best_level, mr.best_accuracy);
        std::fflush(stdout);

        nlohmann::ordered_json jm;
        jm["best_level"] = mr.best_level;
        jm["best_accuracy"] = mr.best_accuracy;
        nlohmann::ordered_json per_level = nlohmann::ordered_json::array();
        for (const ClassificationReport& r : mr.per_level) per_level.push_back(r.overall_accuracy);
        jm["per_level_overall"] = per_level;
        jm["threshold_overall"] = mr.threshold_report.overall_accuracy;
        jm["threshold_max_depth"] = mr.threshold_max_depth;
        summary_methods[tag] = jm;

        result.methods.push_back(std::move(mr));
    }

    nlohmann::ordered_json summary;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : echo) cfg[key] = value;
    summary["config"] = cfg;
    summary["n_images"] = records.size();
    nlohmann::ordered_json class_counts = nlohmann::ordered_json::object();
    for (const auto& [label, count] : per_class) class_counts[label] = count;
    summary["class_counts"] = class_counts;
    summary["methods"] = summary_methods;
    write_text_file(config.out_dir / "summary.json", summary.dump(2) + "\n");
    return result;
}

} // namespace fractex
