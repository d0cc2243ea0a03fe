// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "meshgate/contract.hpp"
#include "meshgate/enforcement.hpp"

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace meshgate {

// PII profiling over sampled data: deterministic detectors (patterns,
// checksums, word lists) with classification proposals and routing actions.

enum class PiiDetector { Email, Phone, CreditCard, NationalIdLike, AddressLike, NameLike };

enum class PiiAction { ApplyClassification, RecommendMasking, NotifySecurity };

std::string_view to_string(PiiDetector d);
std::string_view to_string(PiiAction a);

struct PiiFinding {
    std::string column;
    std::size_t row = 0;
    PiiDetector detector = PiiDetector::Email;
    std::string excerpt; // first 4 chars of the match + "***"

    bool operator==(const PiiFinding&) const = default;
};

struct PiiFindings {
    std::vector<PiiFinding> findings;
    std::map<std::string, PiiClass> proposed_classifications;
    std::vector<PiiAction> routing;
};

struct PiiOptions {
    // Regexes for national-id shaped tokens; the default covers the common
    // 3-2-4 digit layout.
    std::vector<std::string> national_id_patterns = {R"(\d{3}-\d{2}-\d{4})"};
};

/// Mod-10 checksum over a digit string; false for non-digits or length < 2.
bool luhn_valid(std::string_view digits);

/// Full-string card test: 13-19 digits, space/dash separators allowed,
/// Luhn-valid.
bool is_card_number(std::string_view text);

/// Redacts a matched excerpt to its first 4 characters plus "***".
std::string redact_excerpt(std::string_view match);

PiiClass detector_class(PiiDetector d);

/// Scans every string cell with the detector suite. Deterministic: findings
/// ordered by row, then column, then detector, then match position.
PiiFindings profile_pii(const DatasetSample& sample, const PiiOptions& options = {});

/// Folds findings into the contract's compliance block. Unamended input is
/// returned unchanged; any amendment yields a fresh draft (status=draft)
/// touching only compliance.pii_fields and field pii_class markers. Routing
/// echoes the findings' actions plus apply_classification when amended.
std::pair<DataContract, std::vector<PiiAction>>
apply_classification(const DataContract& contract, const PiiFindings& findings);

} // namespace meshgate
