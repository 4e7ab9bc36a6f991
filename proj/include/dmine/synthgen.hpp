#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dmine/util.hpp"

namespace dmine {
namespace synth {

// Activity vocabulary of the loan-application process used by all scenarios.
inline constexpr const char* kApply = "Apply";
inline constexpr const char* kCheck = "Check application data";
inline constexpr const char* kNormalCheck = "Normal Check";
inline constexpr const char* kExtensiveCheck = "Extensive Check";
inline constexpr const char* kSimpleCheck = "Simple Check";
inline constexpr const char* kAssess = "Overall Assessment";
inline constexpr const char* kAcceptLetter = "Write Acceptance Letter";
inline constexpr const char* kRejectLetter = "Write Rejection Letter";
inline constexpr const char* kInform = "Inform Customer";

// Drift scenarios:
//   sd1      threshold of the check rule moves from 80000 to 50000
//   sd2      income appears and joins the rule (income > 3000)
//   sd3      a third class (Simple Check) splits off below 30000
//   sd4      a second decision point appears after Overall Assessment
//   baseline no drift
struct Scenario {
    enum class Kind { sd1, sd2, sd3, sd4, baseline };

    Kind kind = Kind::sd1;
    std::uint64_t n_cases = 5000;
    std::uint64_t drift_at = 2500;  // first case index of the new regime
    std::uint64_t seed = 42;
    double noise = 0.0;         // label flip probability
    std::uint64_t interleave = 0;  // >1: round-robin that many open cases

    static std::optional<Kind> parse_kind(const std::string& name);
    static std::string kind_name(Kind kind);
};

// Ground-truth class per decision point (keyed by the point's activity) for
// the given case index and sampled attributes. Pure; ignores label noise.
std::map<std::string, std::string> oracle_label(
    const Scenario& scenario, std::uint64_t case_index,
    const std::map<std::string, double>& attributes);

// Attribute draws for one case: amount_loan over [10000,120000], age over
// [18,75], plus income over [1000,6000] (sd2, post-drift) and risk_level
// over {0..6} (sd4, post-drift). Draw order is fixed so streams are
// reproducible.
std::map<std::string, double> sample_attributes(const Scenario& scenario,
                                                std::uint64_t case_index,
                                                Rng& rng);

struct GeneratedCase {
    std::uint64_t index = 0;
    std::map<std::string, double> attributes;
    std::map<std::string, std::string> labels;  // per decision point, noise applied
    // (activity, attributes logged on that event)
    std::vector<std::pair<std::string, std::map<std::string, double>>> events;
};

GeneratedCase make_case(const Scenario& scenario, std::uint64_t case_index,
                        Rng& rng);

// Emits the full event log in the ingest CSV schema. Deterministic:
// identical scenario + seed produce byte-identical output.
void generate(const Scenario& scenario, std::ostream& csv_out);

std::string generate_to_string(const Scenario& scenario);

// Ground-truth rules per phase, for the sidecar truth file.
std::string truth_json(const Scenario& scenario);

}  // namespace synth
}  // namespace dmine
