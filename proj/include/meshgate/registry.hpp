// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "meshgate/contract.hpp"
#include "meshgate/diff.hpp"
#include "meshgate/drafting.hpp"
#include "meshgate/time.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace meshgate {

// Approval gate and versioned store. Layout under the store root:
//   pending/<record_id>.review   submission + decision audit records
//   <dataset>/<version>.contract approved canonical documents (append-only)
//   <dataset>/index              `version digest` per line, approval order
// Writes are serialized through an exclusive .lock file.

struct ReviewRecord {
    std::string record_id;
    DataContract contract;
    LifecycleState state = LifecycleState::PendingReview;
    std::optional<OwnerSpec> reviewer;
    std::optional<std::string> decision_note;
    UtcSeconds submitted_at{};
    std::optional<UtcSeconds> decided_at;

    bool operator==(const ReviewRecord&) const = default;
};

enum class ReviewDecision { Approve, Reject };

struct IndexEntry {
    SemVer version;
    std::string digest;

    bool operator==(const IndexEntry&) const = default;
};

/// Persists the draft under pending/ in state pending_review. Throws
/// DuplicateSubmissionError when a byte-identical draft is already pending.
ReviewRecord submit_draft(const DraftResult& draft,
                          const std::filesystem::path& store_root,
                          const Clock& clock = utc_now);

/// Applies an approve/reject decision. Approval assigns the next version
/// (diff against the latest approved contract, 1.0.0 when none), persists
/// the contract, and supersedes the previous version in the derived view.
ReviewRecord review(const std::string& record_id, ReviewDecision decision,
                    const OwnerSpec& reviewer, const std::string& note,
                    const std::filesystem::path& store_root,
                    const Clock& clock = utc_now);

/// Writes the canonical document to `<dataset>/<version>.contract` (atomic
/// temp + rename) and appends to the dataset index. Re-persisting identical
/// content is a no-op; a colliding path with a different digest raises
/// IntegrityError.
std::filesystem::path persist(const DataContract& contract,
                              const std::filesystem::path& store_root);

/// Loads a stored contract; `version_or_latest` is `major.minor.patch` or
/// "latest" (highest approved version). Verifies the file digest against
/// the index.
DataContract load(const std::string& dataset, const std::string& version_or_latest,
                  const std::filesystem::path& store_root);

std::optional<ReviewRecord> find_record(const std::string& record_id,
                                        const std::filesystem::path& store_root);

/// All records under pending/, sorted by record_id (decided ones included).
std::vector<ReviewRecord> list_records(const std::filesystem::path& store_root);

std::vector<IndexEntry> read_index(const std::string& dataset,
                                   const std::filesystem::path& store_root);

/// approved for the index's highest version, superseded for earlier ones.
/// The stored files themselves are never rewritten.
LifecycleState stored_status(const std::string& dataset, const SemVer& version,
                             const std::filesystem::path& store_root);

// Record document round-trip, exposed for tests.
std::string serialize_record(const ReviewRecord& record);
ReviewRecord parse_record(const std::string& text);

} // namespace meshgate
