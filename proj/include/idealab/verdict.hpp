#pragma once

#include <string>

#include "json.hpp"

#include "idealab/rational.hpp"

namespace idealab {

using Json = nlohmann::json;

// Membership answers carry a checkable certificate.  Proven verdicts never
// flip under larger effort; Evidence verdicts may.
enum class VerdictKind { ProvenOut, EvidenceOut, Unknown, EvidenceIn, ProvenIn };

const char* verdict_name(VerdictKind k);

struct Verdict {
    VerdictKind kind = VerdictKind::Unknown;
    Json certificate = Json::object();
    long strength = 0;  // evidence grade, monotone in effort
    Nat effort = 0;

    bool in_ish() const { return kind == VerdictKind::ProvenIn || kind == VerdictKind::EvidenceIn; }
    bool out_ish() const {
        return kind == VerdictKind::ProvenOut || kind == VerdictKind::EvidenceOut;
    }
    bool proven() const {
        return kind == VerdictKind::ProvenIn || kind == VerdictKind::ProvenOut;
    }

    static Verdict proven_in(Json cert, Nat effort = 0) {
        return {VerdictKind::ProvenIn, std::move(cert), 0, effort};
    }
    static Verdict proven_out(Json cert, Nat effort = 0) {
        return {VerdictKind::ProvenOut, std::move(cert), 0, effort};
    }
    static Verdict evidence_in(Json cert, long strength, Nat effort = 0) {
        return {VerdictKind::EvidenceIn, std::move(cert), strength, effort};
    }
    static Verdict evidence_out(Json cert, long strength, Nat effort = 0) {
        return {VerdictKind::EvidenceOut, std::move(cert), strength, effort};
    }
    static Verdict unknown(Json cert, Nat effort = 0) {
        return {VerdictKind::Unknown, std::move(cert), 0, effort};
    }
};

}  // namespace idealab
