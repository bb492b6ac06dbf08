#pragma once

#include <fractex/image.hpp>
#include <fractex/wavelet.hpp>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fractex {

/// Subband scoring criterion for the tree-structured search.
enum class SelectionCriterion { kFractalDimension, kEnergy };

const char* to_string(SelectionCriterion c);

/// Scores of the four subbands at one level, plus the winner.
struct LevelScores {
    int level = 1;
    std::array<double, 4> scores{}; // indexed by Quadrant order LL, LH, HL, HH
    Quadrant selected = Quadrant::LL;
    double spread = 0.0; // max score - min score

    double score(Quadrant q) const { return scores[static_cast<size_t>(q)]; }
};

enum class TerminationReason { kThresholdReached, kNoiseCutoff, kMaxDepth };

const char* to_string(TerminationReason r);

/// The selected quad-tree path with per-level criterion scores.
/// depth counts the levels whose scores enter the feature vector; a level
/// that triggers the threshold or noise cutoff is recorded in levels but
/// excluded from depth.
struct DecompositionTrace {
    SelectionCriterion criterion = SelectionCriterion::kFractalDimension;
    std::vector<LevelScores> levels;
    TerminationReason termination_reason = TerminationReason::kMaxDepth;
    int depth = 0;

    std::vector<Quadrant> selection_path() const;
};

/// Labeled numeric feature record consumed by the classifier.
struct FeatureVector {
    std::vector<double> values;
    std::vector<std::string> names;
    std::string label;
};

enum class FeatureMode { kSelectedOnly, kAllFour };

const char* to_string(FeatureMode m);

/// FD signatures at or above this are treated as noise rather than a
/// meaningful roughness estimate when the noise cutoff is enabled.
inline constexpr double kDefaultNoiseCutoff = 2.985;

struct BestBasisOptions {
    int max_level = 3;
    double lambda = 0.0;
    std::optional<double> noise_cutoff;
    int fd_max_distance = 0; // 0 = default_fd_distance per subband
    BoundaryMode boundary = BoundaryMode::kPeriodic;
};

/// Scores one subband image; level and quadrant identify the node.
using SubbandScorer = std::function<double(const GrayImage&, int level, Quadrant)>;

/// Called once per computed level with the level's subbands and scores,
/// before the search descends or terminates.
using LevelObserver = std::function<void(const SubbandSet&, const LevelScores&)>;

/// Tree-structured best-basis search: analyze the current node, score all
/// four subbands, record a LevelScores entry, and descend into the
/// maximizer (ties broken in fixed LL < LH < HL < HH order). Stops when
/// the score spread drops to lambda or below (ThresholdReached, level
/// excluded from depth), when all four scores reach noise_cutoff
/// (NoiseCutoff, level excluded), or at max_level (MaxDepth, level
/// included).
DecompositionTrace select_best_basis(const GrayImage& img, SelectionCriterion criterion,
                                     int max_level, double lambda,
                                     std::optional<double> noise_cutoff = std::nullopt);

DecompositionTrace select_best_basis(const GrayImage& img, SelectionCriterion criterion,
                                     const BestBasisOptions& options);

/// Same search with an injected scorer (and optional per-level observer).
/// The criterion tag is recorded in the trace for reporting only.
DecompositionTrace select_best_basis_with(const GrayImage& img, const FilterPair& filters,
                                          const SubbandScorer& scorer,
                                          const BestBasisOptions& options,
                                          SelectionCriterion criterion_tag,
                                          const LevelObserver& observer = nullptr);

/// Re-applies the termination rule to an already-computed trace, as if
/// the search had run with the given lambda and cutoff. Valid because the
/// greedy path is independent of the stopping rule; equivalent to
/// rerunning select_best_basis with the new parameters.
DecompositionTrace truncate_trace(const DecompositionTrace& full, double lambda,
                                  std::optional<double> noise_cutoff);

/// Assembles the feature vector from the first `depth` levels of a trace:
/// the selected subband's score per level (SelectedOnly) or all four
/// scores per level in LL, LH, HL, HH order (AllFour). Names encode
/// criterion and level, plus the quadrant in AllFour mode; the winning
/// quadrant of a SelectedOnly entry varies per image and is reported in
/// the trace instead.
FeatureVector extract_feature_vector(const DecompositionTrace& trace, FeatureMode mode);

/// Line-oriented text report: one line per level with the four scores,
/// selected quadrant and spread, then the termination reason and depth.
std::string trace_report(const DecompositionTrace& trace);

} // namespace fractex
