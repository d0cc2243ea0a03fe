// Copyright (c) 2026 Meshgate Contributors
// SPDX-License-Identifier: Apache-2.0

#include "meshgate/registry.hpp"

#include "meshgate/digest.hpp"
#include "meshgate/errors.hpp"
#include "meshgate/linedoc.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <thread>

namespace meshgate {

namespace fs = std::filesystem;

namespace {

// Exclusive store lock: O_CREAT|O_EXCL on `<root>/.lock`, a handful of
// retries, then StoreBusyError.
class StoreLock {
public:
    explicit StoreLock(const fs::path& root) : path_(root / ".lock")
    {
        fs::create_directories(root);
        for (int attempt = 0; attempt < 50; ++attempt) {
            int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
            if (fd >= 0) {
                ::close(fd);
                return;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(10));
        }
        throw StoreBusyError("store is locked: " + path_.string());
    }

    ~StoreLock() { ::unlink(path_.c_str()); }

    StoreLock(const StoreLock&) = delete;
    StoreLock& operator=(const StoreLock&) = delete;

private:
    fs::path path_;
};

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void atomic_write(const fs::path& path, const std::string& content)
{
    fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IntegrityError("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw IntegrityError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

fs::path record_path(const fs::path& root, const std::string& record_id)
{
    return root / "pending" / (record_id + ".review");
}

void write_record(const fs::path& root, const ReviewRecord& record)
{
    atomic_write(record_path(root, record.record_id), serialize_record(record));
}

std::vector<IndexEntry> read_index_unlocked(const std::string& dataset,
                                            const fs::path& root)
{
    const fs::path index_path = root / dataset / "index";
    std::vector<IndexEntry> entries;
    std::ifstream in(index_path, std::ios::binary);
    if (!in) return entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t space = line.find(' ');
        if (space == std::string::npos) {
            throw IntegrityError(index_path.string() + ":" + std::to_string(line_no) +
                                 ": malformed index line");
        }
        auto version = SemVer::parse(line.substr(0, space));
        std::string digest = line.substr(space + 1);
        if (!version || !is_hex_digest(digest)) {
            throw IntegrityError(index_path.string() + ":" + std::to_string(line_no) +
                                 ": malformed index line");
        }
        entries.push_back({*version, std::move(digest)});
    }
    return entries;
}

std::optional<IndexEntry> latest_entry(const std::vector<IndexEntry>& entries)
{
    if (entries.empty()) return std::nullopt;
    return *std::max_element(entries.begin(), entries.end(),
                             [](const IndexEntry& a, const IndexEntry& b) {
                                 return a.version < b.version;
                             });
}

DataContract load_unlocked(const std::string& dataset,
                           const std::string& version_or_latest, const fs::path& root)
{
    auto entries = read_index_unlocked(dataset, root);
    if (entries.empty()) {
        throw UsageError("no approved versions for dataset " + dataset);
    }
    IndexEntry wanted;
    if (version_or_latest == "latest") {
        wanted = *latest_entry(entries);
    } else {
        auto version = SemVer::parse(version_or_latest);
        if (!version) {
            throw UsageError("version must be major.minor.patch or latest: " +
                             version_or_latest);
        }
        auto it = std::find_if(entries.begin(), entries.end(),
                               [&](const IndexEntry& e) { return e.version == *version; });
        if (it == entries.end()) {
            throw UsageError("version " + version_or_latest +
                             " not in index for dataset " + dataset);
        }
        wanted = *it;
    }

    const fs::path path = root / dataset / (wanted.version.str() + ".contract");
    if (!fs::exists(path)) {
        throw IntegrityError("index references missing file: " + path.string());
    }
    const std::string document = read_file(path);
    if (sha256_hex(document) != wanted.digest) {
        throw IntegrityError("digest mismatch between index and " + path.string());
    }
    auto parsed = parse_contract(document);
    if (!parsed.ok()) {
        throw IntegrityError("stored contract unparseable: " + path.string());
    }
    return *parsed.contract;
}

fs::path persist_unlocked(const DataContract& contract, const fs::path& root)
{
    if (contract.status != LifecycleState::Approved) {
        throw UsageError("only approved contracts may be persisted");
    }
    const std::string document = serialize(contract);
    const std::string digest = sha256_hex(document);
    const fs::path dir = root / contract.dataset_name;
    const fs::path path = dir / (contract.version.str() + ".contract");

    auto entries = read_index_unlocked(contract.dataset_name, root);
    auto indexed = std::find_if(entries.begin(), entries.end(), [&](const IndexEntry& e) {
        return e.version == contract.version;
    });

    if (fs::exists(path)) {
        if (sha256_hex(read_file(path)) != digest) {
            throw IntegrityError("path collision with differing content: " +
                                 path.string());
        }
        if (indexed != entries.end() && indexed->digest != digest) {
            throw IntegrityError("index digest disagrees with contract: " +
                                 path.string());
        }
        if (indexed == entries.end()) {
            std::ofstream out(dir / "index", std::ios::binary | std::ios::app);
            out << contract.version.str() << ' ' << digest << '\n';
        }
        return path; // idempotent re-persist
    }
    if (indexed != entries.end()) {
        throw IntegrityError("index references missing file: " + path.string());
    }

    atomic_write(path, document);
    std::ofstream out(dir / "index", std::ios::binary | std::ios::app);
    if (!out) throw IntegrityError("cannot append to index for " +
                                   contract.dataset_name);
    out << contract.version.str() << ' ' << digest << '\n';
    return path;
}

} // namespace

std::string serialize_record(const ReviewRecord& record)
{
    std::string out;
    out += "record_id: " + record.record_id + "\n";
    out += "state: ";
    out += to_string(record.state);
    out += '\n';
    out += "submitted_at: " + format_utc(record.submitted_at) + "\n";
    if (record.decided_at) {
        out += "decided_at: " + format_utc(*record.decided_at) + "\n";
    }
    if (record.reviewer) {
        out += "reviewer_team: " + linedoc::quote(record.reviewer->team) + "\n";
        out += "reviewer_email: " + linedoc::quote(record.reviewer->email) + "\n";
    }
    if (record.decision_note) {
        out += "note: " + linedoc::quote(*record.decision_note) + "\n";
    }
    out += "contract:\n";
    std::istringstream doc(serialize(record.contract));
    std::string line;
    while (std::getline(doc, line)) {
        out += "  " + line + "\n";
    }
    return out;
}

ReviewRecord parse_record(const std::string& text)
{
    ReviewRecord record;
    std::istringstream in(text);
    std::string line;
    std::string contract_doc;
    bool in_contract = false;
    bool have_state = false;
    bool have_submitted = false;

    auto bad = [](const std::string& msg) {
        return IntegrityError("malformed review record: " + msg);
    };

    while (std::getline(in, line)) {
        if (in_contract) {
            if (line.rfind("  ", 0) != 0 && !line.empty()) {
                throw bad("contract block must be indented");
            }
            contract_doc += line.size() >= 2 ? line.substr(2) : line;
            contract_doc += '\n';
            continue;
        }
        std::size_t colon = line.find(": ");
        if (line == "contract:") {
            in_contract = true;
            continue;
        }
        if (colon == std::string::npos) throw bad("expected key: value, got " + line);
        std::string key = line.substr(0, colon);
        std::string value = line.substr(colon + 2);
        if (key == "record_id") {
            record.record_id = value;
        } else if (key == "state") {
            auto s = lifecycle_state_from(value);
            if (!s) throw bad("unknown state " + value);
            record.state = *s;
            have_state = true;
        } else if (key == "submitted_at") {
            auto t = parse_utc(value);
            if (!t) throw bad("bad submitted_at");
            record.submitted_at = *t;
            have_submitted = true;
        } else if (key == "decided_at") {
            auto t = parse_utc(value);
            if (!t) throw bad("bad decided_at");
            record.decided_at = *t;
        } else if (key == "reviewer_team") {
            auto s = linedoc::unquote(value);
            if (!s) throw bad("bad reviewer_team");
            if (!record.reviewer) record.reviewer = OwnerSpec{};
            record.reviewer->team = *s;
        } else if (key == "reviewer_email") {
            auto s = linedoc::unquote(value);
            if (!s) throw bad("bad reviewer_email");
            if (!record.reviewer) record.reviewer = OwnerSpec{};
            record.reviewer->email = *s;
        } else if (key == "note") {
            auto s = linedoc::unquote(value);
            if (!s) throw bad("bad note");
            record.decision_note = *s;
        } else {
            throw bad("unknown key " + key);
        }
    }

    if (record.record_id.empty() || !have_state || !have_submitted || !in_contract) {
        throw bad("missing required keys");
    }
    auto parsed = parse_contract(contract_doc);
    if (!parsed.ok()) {
        std::string detail;
        if (!parsed.errors.empty()) detail = ": " + parsed.errors.front().message;
        throw bad("embedded contract unparseable" + detail);
    }
    record.contract = *parsed.contract;
    return record;
}

ReviewRecord submit_draft(const DraftResult& draft, const fs::path& store_root,
                          const Clock& clock)
{
    StoreLock lock(store_root);

    ReviewRecord record;
    record.contract = draft.contract;
    if (record.contract.status != LifecycleState::Draft) {
        throw UsageError("only drafts may be submitted for review");
    }
    record.contract.status = LifecycleState::PendingReview;
    record.state = LifecycleState::PendingReview;
    record.submitted_at = clock();

    const std::string digest = content_digest(record.contract);
    for (const ReviewRecord& existing : list_records(store_root)) {
        if (existing.state == LifecycleState::PendingReview &&
            content_digest(existing.contract) == digest) {
            throw DuplicateSubmissionError(
                "an identical draft is already pending review: " +
                existing.record_id);
        }
    }

    record.record_id =
        sha256_hex(digest + "\n" + format_utc(record.submitted_at)).substr(0, 16);
    write_record(store_root, record);
    return record;
}

ReviewRecord review(const std::string& record_id, ReviewDecision decision,
                    const OwnerSpec& reviewer, const std::string& note,
                    const fs::path& store_root, const Clock& clock)
{
    if (reviewer.team.empty() || !is_basic_email(reviewer.email)) {
        throw UsageError("reviewer needs a team and a valid email");
    }

    StoreLock lock(store_root);

    auto record = find_record(record_id, store_root);
    if (!record) throw UsageError("unknown review record: " + record_id);
    if (record->state != LifecycleState::PendingReview) {
        throw UsageError("record " + record_id + " is not pending review");
    }

    const UtcSeconds decided = clock();
    if (decided < record->submitted_at) {
        throw ClockSkewError("decision time precedes submission time for " + record_id);
    }

    record->reviewer = reviewer;
    record->decision_note = note.empty() ? std::nullopt : std::optional(note);
    record->decided_at = decided;

    if (decision == ReviewDecision::Reject) {
        record->state = LifecycleState::Rejected;
        record->contract.status = LifecycleState::Rejected;
        write_record(store_root, *record);
        return *record;
    }

    auto entries = read_index_unlocked(record->contract.dataset_name, store_root);
    std::optional<SemVer> prior_version;
    CompatibilityReport report;
    if (auto latest = latest_entry(entries)) {
        prior_version = latest->version;
        DataContract prior = load_unlocked(record->contract.dataset_name,
                                           latest->version.str(), store_root);
        report = diff(prior, record->contract);
    }

    record->state = LifecycleState::Approved;
    record->contract.status = LifecycleState::Approved;
    record->contract.version = next_version(prior_version, report);
    persist_unlocked(record->contract, store_root);
    write_record(store_root, *record);
    return *record;
}

fs::path persist(const DataContract& contract, const fs::path& store_root)
{
    StoreLock lock(store_root);
    return persist_unlocked(contract, store_root);
}

DataContract load(const std::string& dataset, const std::string& version_or_latest,
                  const fs::path& store_root)
{
    return load_unlocked(dataset, version_or_latest, store_root);
}

std::optional<ReviewRecord> find_record(const std::string& record_id,
                                        const fs::path& store_root)
{
    const fs::path path = record_path(store_root, record_id);
    if (!fs::exists(path)) return std::nullopt;
    return parse_record(read_file(path));
}

std::vector<ReviewRecord> list_records(const fs::path& store_root)
{
    std::vector<ReviewRecord> records;
    const fs::path dir = store_root / "pending";
    if (!fs::exists(dir)) return records;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".review") continue;
        records.push_back(parse_record(read_file(entry.path())));
    }
    std::sort(records.begin(), records.end(),
              [](const ReviewRecord& a, const ReviewRecord& b) {
                  return a.record_id < b.record_id;
              });
    return records;
}

std::vector<IndexEntry> read_index(const std::string& dataset, const fs::path& root)
{
    return read_index_unlocked(dataset, root);
}

LifecycleState stored_status(const std::string& dataset, const SemVer& version,
                             const fs::path& store_root)
{
    auto entries = read_index_unlocked(dataset, store_root);
    auto it = std::find_if(entries.begin(), entries.end(),
                           [&](const IndexEntry& e) { return e.version == version; });
    if (it == entries.end()) {
        throw UsageError("version " + version.str() + " not in index for " + dataset);
    }
    return latest_entry(entries)->version == version ? LifecycleState::Approved
                                                     : LifecycleState::Superseded;
}

} // namespace meshgate
