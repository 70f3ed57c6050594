#include "modsim/core/periods.hpp"

#include <stdexcept>

namespace modsim::core {

std::string to_string(PeriodName p) {
    switch (p) {
        case PeriodName::Baseline: return "Baseline";
        case PeriodName::Jan6: return "Jan6";
        case PeriodName::Jan12: return "Jan12";
        case PeriodName::RemovedPages: return "RemovedPages";
    }
    throw std::invalid_argument("bad period");
}

PeriodName period_from_string(const std::string& s) {
    if (s == "Baseline") return PeriodName::Baseline;
    if (s == "Jan6") return PeriodName::Jan6;
    if (s == "Jan12") return PeriodName::Jan12;
    if (s == "RemovedPages") return PeriodName::RemovedPages;
    throw std::invalid_argument("unknown period name: " + s);
}

std::string to_string(Partisanship p) {
    switch (p) {
        case Partisanship::FarLeft: return "FarLeft";
        case Partisanship::SlightlyLeft: return "SlightlyLeft";
        case Partisanship::Center: return "Center";
        case Partisanship::SlightlyRight: return "SlightlyRight";
        case Partisanship::FarRight: return "FarRight";
    }
    throw std::invalid_argument("bad partisanship");
}

Partisanship partisanship_from_string(const std::string& s) {
    if (s == "FarLeft") return Partisanship::FarLeft;
    if (s == "SlightlyLeft") return Partisanship::SlightlyLeft;
    if (s == "Center") return Partisanship::Center;
    if (s == "SlightlyRight") return Partisanship::SlightlyRight;
    if (s == "FarRight") return Partisanship::FarRight;
    throw std::invalid_argument("unknown partisanship: " + s);
}

void PeriodSet::validate() const {
    if (periods.size() != 3) {
        throw std::invalid_argument("expected exactly three time periods");
    }
    const PeriodName order[3] = {PeriodName::Baseline, PeriodName::Jan6, PeriodName::Jan12};
    for (int i = 0; i < 3; ++i) {
        if (periods[i].name != order[i]) {
            throw std::invalid_argument("periods must be Baseline, Jan6, Jan12 in order");
        }
        if (periods[i].end <= periods[i].start) {
            throw std::invalid_argument("period end must exceed start");
        }
    }
    for (int i = 1; i < 3; ++i) {
        if (periods[i].start != periods[i - 1].end) {
            throw std::invalid_argument("periods must be contiguous");
        }
    }
}

PeriodName PeriodSet::period_of(SimTime t) const {
    for (const auto& p : periods) {
        if (t >= p.start && t < p.end) return p.name;
    }
    throw std::out_of_range("time falls outside all periods");
}

const Period& PeriodSet::get(PeriodName name) const {
    for (const auto& p : periods) {
        if (p.name == name) return p;
    }
    throw std::out_of_range("no such period");
}

PeriodSet default_periods(SimTime window_start, SimTime horizon) {
    PeriodSet s;
    s.periods = {
        {PeriodName::Baseline, window_start, window_start + days(21)},
        {PeriodName::Jan6, window_start + days(21), window_start + days(29)},
        {PeriodName::Jan12, window_start + days(29), horizon},
    };
    s.validate();
    return s;
}

} // namespace modsim::core
