#include <fractex/best_basis.hpp>

#include <fractex/errors.hpp>
#include <fractex/fractal.hpp>
#include <fractex/glcm.hpp>

#include <algorithm>
#include <cstdio>
#include <utility>

namespace fractex {

namespace {

void fill_selection(LevelScores& ls) {
    int best = 0;
    double mx = ls.scores[0];
    double mn = ls.scores[0];
    for (int i = 1; i < 4; ++i) {
        if (ls.scores[i] > mx) {
            mx = ls.scores[i];
            best = i;
        }
        mn = std::min(mn, ls.scores[i]);
    }
    ls.selected = kQuadrants[static_cast<size_t>(best)];
    ls.spread = mx - mn;
}

bool all_at_cutoff(const LevelScores& ls, double cutoff) {
    return std::all_of(ls.scores.begin(), ls.scores.end(),
                       [cutoff](double s) { return s >= cutoff; });
}

std::string format_score(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

const char* to_string(SelectionCriterion c) {
    switch (c) {
        case SelectionCriterion::kFractalDimension: return "fd";
        case SelectionCriterion::kEnergy: return "energy";
    }
    throw Error("to_string(SelectionCriterion): invalid value");
}

const char* to_string(TerminationReason r) {
    switch (r) {
        case TerminationReason::kThresholdReached: return "threshold_reached";
        case TerminationReason::kNoiseCutoff: return "noise_cutoff";
        case TerminationReason::kMaxDepth: return "max_depth";
    }
    throw Error("to_string(TerminationReason): invalid value");
}

const char* to_string(FeatureMode m) {
    switch (m) {
        case FeatureMode::kSelectedOnly: return "selected_only";
        case FeatureMode::kAllFour: return "all_four";
    }
    throw Error("to_string(FeatureMode): invalid value");
}

std::vector<Quadrant> DecompositionTrace::selection_path() const {
    std::vector<Quadrant> path;
    path.reserve(static_cast<size_t>(depth));
    for (int i = 0; i < depth; ++i) {
        path.push_back(levels[static_cast<size_t>(i)].selected);
    }
    return path;
}

DecompositionTrace select_best_basis_with(const GrayImage& img, const FilterPair& filters,
                                          const SubbandScorer& scorer,
                                          const BestBasisOptions& options,
                                          SelectionCriterion criterion_tag,
                                          const LevelObserver& observer) {
    if (options.max_level < 1 || options.max_level > 8) {
        throw PreconditionError("select_best_basis: max_level must be in 1..8");
    }
    if (options.lambda < 0.0) {
        throw PreconditionError("select_best_basis: lambda must be >= 0");
    }
    validate_image(img, "select_best_basis");

    DecompositionTrace trace;
    trace.criterion = criterion_tag;

    GrayImage current = img;
    std::vector<Quadrant> path;
    for (int level = 1; level <= options.max_level; ++level) {
        SubbandSet sub = analyze_level(current, filters, level, options.boundary, path);
        LevelScores ls;
        ls.level = level;
        for (int i = 0; i < 4; ++i) {
            const Quadrant q = kQuadrants[static_cast<size_t>(i)];
            ls.scores[static_cast<size_t>(i)] = scorer(sub.band(q), level, q);
        }
        fill_selection(ls);
        trace.levels.push_back(ls);
        if (observer) observer(sub, ls);

        if (options.lambda > 0.0 && ls.spread <= options.lambda) {
            trace.termination_reason = TerminationReason::kThresholdReached;
            trace.depth = level - 1;
            return trace;
        }
        if (options.noise_cutoff && all_at_cutoff(ls, *options.noise_cutoff)) {
            trace.termination_reason = TerminationReason::kNoiseCutoff;
            trace.depth = level - 1;
            return trace;
        }
        if (level == options.max_level) break;
        current = sub.band(ls.selected);
        path.push_back(ls.selected);
    }
    trace.termination_reason = TerminationReason::kMaxDepth;
    trace.depth = options.max_level;
    return trace;
}

DecompositionTrace select_best_basis(const GrayImage& img, SelectionCriterion criterion,
                                     const BestBasisOptions& options) {
    const FilterPair filters = db8_filters();
    SubbandScorer scorer;
    if (criterion == SelectionCriterion::kFractalDimension) {
        const int dist = options.fd_max_distance;
        scorer = [dist](const GrayImage& band, int, Quadrant) {
            const int d = dist > 0 ? dist : default_fd_distance(band);
            return estimate_fd(band, d).fd;
        };
    } else {
        scorer = [](const GrayImage& band, int, Quadrant) { return subband_energy(band); };
    }
    return select_best_basis_with(img, filters, scorer, options, criterion);
}

DecompositionTrace select_best_basis(const GrayImage& img, SelectionCriterion criterion,
                                     int max_level, double lambda,
                                     std::optional<double> noise_cutoff) {
    BestBasisOptions options;
    options.max_level = max_level;
    options.lambda = lambda;
    options.noise_cutoff = noise_cutoff;
    return select_best_basis(img, criterion, options);
}

DecompositionTrace truncate_trace(const DecompositionTrace& full, double lambda,
                                  std::optional<double> noise_cutoff) {
    if (lambda < 0.0) throw PreconditionError("truncate_trace: lambda must be >= 0");
    DecompositionTrace out;
    out.criterion = full.criterion;
    for (size_t i = 0; i < full.levels.size(); ++i) {
        const LevelScores& ls = full.levels[i];
        out.levels.push_back(ls);
        if (lambda > 0.0 && ls.spread <= lambda) {
            out.termination_reason = TerminationReason::kThresholdReached;
            out.depth = ls.level - 1;
            return out;
        }
        if (noise_cutoff && all_at_cutoff(ls, *noise_cutoff)) {
            out.termination_reason = TerminationReason::kNoiseCutoff;
            out.depth = ls.level - 1;
            return out;
        }
    }
    out.termination_reason = full.termination_reason;
    out.depth = full.depth;
    return out;
}

FeatureVector extract_feature_vector(const DecompositionTrace& trace, FeatureMode mode) {
    if (trace.depth < 1) {
        throw PreconditionError("extract_feature_vector: trace depth is 0");
    }
    const std::string tag = to_string(trace.criterion);
    FeatureVector fv;
    for (int i = 0; i < trace.depth; ++i) {
        const LevelScores& ls = trace.levels[static_cast<size_t>(i)];
        const std::string prefix = tag + "_L" + std::to_string(ls.level);
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
    return fv;
}

std::string trace_report(const DecompositionTrace& trace) {
    std::string out = "criterion ";
    out += to_string(trace.criterion);
    out += '\n';
    for (const LevelScores& ls : trace.levels) {
        out += "level " + std::to_string(ls.level);
        for (Quadrant q : kQuadrants) {
            out += std::string(" ") + to_string(q) + " " + format_score(ls.score(q));
        }
        out += std::string(" selected ") + to_string(ls.selected);
        out += " spread " + format_score(ls.spread);
        out += '\n';
    }
    out += std::string("termination ") + to_string(trace.termination_reason) + "\n";
    out += "depth " + std::to_string(trace.depth) + "\n";
    return out;
}

} // namespace fractex
