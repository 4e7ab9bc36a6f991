#include "dmine/synthgen.hpp"

#include <deque>
#include <sstream>

namespace dmine {
namespace synth {

namespace {

const char* kAmount = "amount_loan";
const char* kAge = "age";
const char* kIncome = "income";
const char* kRisk = "risk_level";

std::vector<std::string> check_classes(const Scenario& s, bool post) {
    if (s.kind == Scenario::Kind::sd3 && post) {
        return {kSimpleCheck, kNormalCheck, kExtensiveCheck};
    }
    return {kNormalCheck, kExtensiveCheck};
}

std::string check_label(const Scenario& s, bool post, double amount,
                        double income) {
    switch (s.kind) {
        case Scenario::Kind::sd1:
            return amount <= (post ? 50000.0 : 80000.0) ? kNormalCheck
                                                        : kExtensiveCheck;
        case Scenario::Kind::sd2:
            if (!post) return amount <= 80000.0 ? kNormalCheck : kExtensiveCheck;
            return (amount <= 80000.0 && income > 3000.0) ? kNormalCheck
                                                          : kExtensiveCheck;
        case Scenario::Kind::sd3:
            if (!post) return amount <= 70000.0 ? kNormalCheck : kExtensiveCheck;
            if (amount <= 30000.0) return kSimpleCheck;
            return amount <= 70000.0 ? kNormalCheck : kExtensiveCheck;
        case Scenario::Kind::sd4:
        case Scenario::Kind::baseline:
            return amount <= 80000.0 ? kNormalCheck : kExtensiveCheck;
    }
    return kNormalCheck;
}

std::string letter_label(double risk, double amount) {
    if (risk < 4.0 && amount < 80000.0) return kAcceptLetter;
    if (risk <= 1.0 && amount >= 80000.0) return kAcceptLetter;
    return kRejectLetter;
}

std::string flip_label(const std::string& label,
                       const std::vector<std::string>& classes, Rng& rng) {
    std::vector<std::string> others;
    for (const auto& c : classes) {
        if (c != label) others.push_back(c);
    }
    if (others.empty()) return label;
    return others[rng.uniform_int(0, others.size() - 1)];
}

std::vector<std::string> scenario_columns(const Scenario& s) {
    std::vector<std::string> cols = {"case_id", "activity", kAmount, kAge};
    if (s.kind == Scenario::Kind::sd2) cols.push_back(kIncome);
    if (s.kind == Scenario::Kind::sd4) cols.push_back(kRisk);
    return cols;
}

std::string format_attr(const std::string& name, double v) {
    if (name == kRisk) return std::to_string(static_cast<long long>(v));
    return format_fixed(v, 2);
}

}  // namespace

std::optional<Scenario::Kind> Scenario::parse_kind(const std::string& name) {
    if (name == "sd1") return Kind::sd1;
    if (name == "sd2") return Kind::sd2;
    if (name == "sd3") return Kind::sd3;
    if (name == "sd4") return Kind::sd4;
    if (name == "baseline") return Kind::baseline;
    return std::nullopt;
}

std::string Scenario::kind_name(Kind kind) {
    switch (kind) {
        case Kind::sd1: return "sd1";
        case Kind::sd2: return "sd2";
        case Kind::sd3: return "sd3";
        case Kind::sd4: return "sd4";
        case Kind::baseline: return "baseline";
    }
    return "?";
}

std::map<std::string, double> sample_attributes(const Scenario& scenario,
                                                std::uint64_t case_index,
                                                Rng& rng) {
    const bool post = scenario.kind != Scenario::Kind::baseline &&
                      case_index >= scenario.drift_at;
    std::map<std::string, double> attrs;
    attrs[kAmount] = rng.uniform(10000.0, 120000.0);
    attrs[kAge] = rng.uniform(18.0, 75.0);
    if (scenario.kind == Scenario::Kind::sd2 && post) {
        attrs[kIncome] = rng.uniform(1000.0, 6000.0);
    }
    if (scenario.kind == Scenario::Kind::sd4 && post) {
        attrs[kRisk] = static_cast<double>(rng.uniform_int(0, 6));
    }
    return attrs;
}

std::map<std::string, std::string> oracle_label(
    const Scenario& scenario, std::uint64_t case_index,
    const std::map<std::string, double>& attributes) {
    const bool post = scenario.kind != Scenario::Kind::baseline &&
                      case_index >= scenario.drift_at;
    auto get = [&attributes](const char* name) {
        auto it = attributes.find(name);
        return it == attributes.end() ? 0.0 : it->second;
    };
    std::map<std::string, std::string> labels;
    labels[kCheck] = check_label(scenario, post, get(kAmount), get(kIncome));
    if (scenario.kind == Scenario::Kind::sd4 && post) {
        labels[kAssess] = letter_label(get(kRisk), get(kAmount));
    }
    return labels;
}

GeneratedCase make_case(const Scenario& scenario, std::uint64_t case_index,
                        Rng& rng) {
    const bool post = scenario.kind != Scenario::Kind::baseline &&
                      case_index >= scenario.drift_at;
    GeneratedCase gc;
    gc.index = case_index;
    gc.attributes = sample_attributes(scenario, case_index, rng);
    gc.labels = oracle_label(scenario, case_index, gc.attributes);

    if (scenario.noise > 0.0) {
        if (rng.bernoulli(scenario.noise)) {
            gc.labels[kCheck] =
                flip_label(gc.labels[kCheck], check_classes(scenario, post), rng);
        }
        if (gc.labels.count(kAssess) && rng.bernoulli(scenario.noise)) {
            gc.labels[kAssess] = flip_label(gc.labels[kAssess],
                                            {kAcceptLetter, kRejectLetter}, rng);
        }
    }

    std::map<std::string, double> apply_attrs = {{kAmount, gc.attributes.at(kAmount)}};
    if (gc.attributes.count(kIncome)) apply_attrs[kIncome] = gc.attributes.at(kIncome);
    gc.events.emplace_back(kApply, apply_attrs);
    gc.events.emplace_back(kCheck,
                           std::map<std::string, double>{{kAge, gc.attributes.at(kAge)}});
    gc.events.emplace_back(gc.labels.at(kCheck), std::map<std::string, double>{});
    std::map<std::string, double> assess_attrs;
    if (gc.attributes.count(kRisk)) assess_attrs[kRisk] = gc.attributes.at(kRisk);
    gc.events.emplace_back(kAssess, assess_attrs);
    if (gc.labels.count(kAssess)) {
        gc.events.emplace_back(gc.labels.at(kAssess), std::map<std::string, double>{});
    }
    gc.events.emplace_back(kInform, std::map<std::string, double>{});
    return gc;
}

void generate(const Scenario& scenario, std::ostream& csv_out) {
    const auto columns = scenario_columns(scenario);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) csv_out << ",";
        csv_out << columns[i];
    }
    csv_out << "\n";

    Rng rng(scenario.seed);
    auto emit_event = [&](std::uint64_t case_index, const std::string& activity,
                          const std::map<std::string, double>& attrs) {
        csv_out << "c" << case_index << "," << activity;
        for (std::size_t i = 2; i < columns.size(); ++i) {
            csv_out << ",";
            auto it = attrs.find(columns[i]);
            if (it != attrs.end()) csv_out << format_attr(columns[i], it->second);
        }
        csv_out << "\n";
    };

    if (scenario.interleave <= 1) {
        for (std::uint64_t i = 0; i < scenario.n_cases; ++i) {
            const GeneratedCase gc = make_case(scenario, i, rng);
            for (const auto& [activity, attrs] : gc.events) {
                emit_event(i, activity, attrs);
            }
        }
        return;
    }

    // round-robin over `interleave` open cases; case draws stay in case
    // order so the data is identical to the sequential layout
    struct Slot {
        std::uint64_t index = 0;
        std::deque<std::pair<std::string, std::map<std::string, double>>> events;
    };
    std::vector<Slot> slots(scenario.interleave);
    std::uint64_t next_case = 0;
    std::uint64_t remaining = scenario.n_cases;
    auto load = [&](Slot& slot) {
        if (next_case >= scenario.n_cases) return false;
        GeneratedCase gc = make_case(scenario, next_case, rng);
        slot.index = next_case;
        slot.events.assign(gc.events.begin(), gc.events.end());
        ++next_case;
        return true;
    };
    for (auto& slot : slots) load(slot);
    while (remaining > 0) {
        for (auto& slot : slots) {
            if (slot.events.empty()) continue;
            emit_event(slot.index, slot.events.front().first,
                       slot.events.front().second);
            slot.events.pop_front();
            if (slot.events.empty()) {
                --remaining;
                load(slot);
            }
        }
    }
}

std::string generate_to_string(const Scenario& scenario) {
    std::ostringstream os;
    generate(scenario, os);
    return os.str();
}

std::string truth_json(const Scenario& scenario) {
    auto rule = [](const std::string& text) { return "\"" + text + "\""; };
    std::ostringstream os;
    os << "{\n  \"scenario\": \"" << Scenario::kind_name(scenario.kind)
       << "\",\n  \"n_cases\": " << scenario.n_cases
       << ",\n  \"drift_at\": " << scenario.drift_at
       << ",\n  \"seed\": " << scenario.seed << ",\n";
    os << "  \"pre_drift\": [\n    ";
    switch (scenario.kind) {
        case Scenario::Kind::sd3:
            os << rule("IF amount_loan <= 70000.00 THEN Normal Check") << ",\n    "
               << rule("IF amount_loan > 70000.00 THEN Extensive Check");
            break;
        default:
            os << rule("IF amount_loan <= 80000.00 THEN Normal Check") << ",\n    "
               << rule("IF amount_loan > 80000.00 THEN Extensive Check");
            break;
    }
    os << "\n  ],\n  \"post_drift\": [\n    ";
    switch (scenario.kind) {
        case Scenario::Kind::sd1:
            os << rule("IF amount_loan <= 50000.00 THEN Normal Check") << ",\n    "
               << rule("IF amount_loan > 50000.00 THEN Extensive Check");
            break;
        case Scenario::Kind::sd2:
            os << rule("IF amount_loan <= 80000.00 AND income > 3000.00 THEN Normal Check")
               << ",\n    " << rule("ELSE Extensive Check");
            break;
        case Scenario::Kind::sd3:
            os << rule("IF amount_loan <= 30000.00 THEN Simple Check") << ",\n    "
               << rule("IF amount_loan > 30000.00 AND amount_loan <= 70000.00 THEN Normal Check")
               << ",\n    " << rule("IF amount_loan > 70000.00 THEN Extensive Check");
            break;
        case Scenario::Kind::sd4:
            os << rule("IF amount_loan <= 80000.00 THEN Normal Check") << ",\n    "
               << rule("IF amount_loan > 80000.00 THEN Extensive Check") << ",\n    "
               << rule("IF risk_level < 4 AND amount_loan < 80000.00 THEN Write Acceptance Letter")
               << ",\n    "
               << rule("IF risk_level <= 1 AND amount_loan >= 80000.00 THEN Write Acceptance Letter")
               << ",\n    " << rule("ELSE Write Rejection Letter");
            break;
        case Scenario::Kind::baseline:
            os << rule("IF amount_loan <= 80000.00 THEN Normal Check") << ",\n    "
               << rule("IF amount_loan > 80000.00 THEN Extensive Check");
            break;
    }
    os << "\n  ]\n}\n";
    return os.str();
}

}  // namespace synth
}  // namespace dmine
