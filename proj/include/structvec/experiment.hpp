#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "structvec/classify.hpp"
#include "structvec/dataset.hpp"
#include "structvec/embedding_store.hpp"
#include "structvec/errors.hpp"

namespace structvec {

// One accuracy grid: rows are vector sets, columns are classifier
// architectures.  Flat key-value spec file:
//
//   pairs = data/positives.tsv
//   vectors = text:models/text.vec, joint:models/joint.vec
//   archs = mlp, shared-mlp, shared-cos
//   split = 0.8,0.1,0.1
//   negative_ratio = 1
//   seed = 42
//   hidden = 200        (and optional batch / lr / epochs / patience / leak)
struct ExperimentSpec {
    std::vector<std::pair<std::string, std::string>> vector_sets;  // (name, path)
    std::vector<Arch> archs;
    std::string pairs_path;
    SplitRatios split{0.8, 0.1, 0.1};
    double negative_ratio = 1.0;
    std::uint64_t seed = 1;
    ClassifierOptions classifier;

    void validate() const {
        if (vector_sets.empty()) throw ConfigError("experiment needs at least one vector set");
        if (archs.empty()) throw ConfigError("experiment needs at least one architecture");
        if (pairs_path.empty()) throw ConfigError("experiment needs a pairs file");
        if (negative_ratio <= 0.0) throw ConfigError("negative_ratio must be positive");
        split.validate();
    }
};

namespace detail {

inline std::string strip(const std::string& s) {
    std::size_t lo = s.find_first_not_of(" \t");
    if (lo == std::string::npos) return {};
    std::size_t hi = s.find_last_not_of(" \t");
    return s.substr(lo, hi - lo + 1);
}

inline std::vector<std::string> split_list(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(strip(s.substr(start)));
            break;
        }
        out.push_back(strip(s.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

}  // namespace detail

inline ExperimentSpec parse_experiment_spec(std::istream& in) {
    ExperimentSpec spec;
    std::string line;
    long line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string text = detail::strip(line);
        if (text.empty() || text[0] == '#') continue;
        std::size_t eq = text.find('=');
        if (eq == std::string::npos) throw ParseError("expected key = value", line_number);
        std::string key = detail::strip(text.substr(0, eq));
        std::string value = detail::strip(text.substr(eq + 1));
        try {
            if (key == "pairs") {
                spec.pairs_path = value;
            } else if (key == "vectors") {
                for (const std::string& entry : detail::split_list(value, ',')) {
                    std::size_t colon = entry.find(':');
                    if (colon == std::string::npos)
                        throw ConfigError("vectors entries must be name:path");
                    spec.vector_sets.emplace_back(detail::strip(entry.substr(0, colon)),
                                                  detail::strip(entry.substr(colon + 1)));
                }
            } else if (key == "archs") {
                for (const std::string& entry : detail::split_list(value, ','))
                    spec.archs.push_back(arch_from_string(entry));
            } else if (key == "split") {
                std::vector<std::string> parts = detail::split_list(value, ',');
                if (parts.size() != 3) throw ConfigError("split needs three ratios");
                spec.split = {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2])};
            } else if (key == "negative_ratio") {
                spec.negative_ratio = std::stod(value);
            } else if (key == "seed") {
                spec.seed = static_cast<std::uint64_t>(std::stoull(value));
            } else if (key == "hidden") {
                spec.classifier.hidden = std::stoi(value);
            } else if (key == "batch") {
                spec.classifier.batch = std::stoi(value);
            } else if (key == "lr") {
                spec.classifier.lr = std::stod(value);
            } else if (key == "epochs") {
                spec.classifier.epochs = std::stoi(value);
            } else if (key == "patience") {
                spec.classifier.patience = std::stoi(value);
            } else if (key == "leak") {
                spec.classifier.leak = std::stod(value);
            } else {
                throw ConfigError("unknown key '" + key + "'");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(std::string("bad value for '") + key + "': " + e.what(), line_number);
        }
    }
    spec.validate();
    return spec;
}

inline ExperimentSpec parse_experiment_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open experiment spec: " + path);
    return parse_experiment_spec(in);
}

struct ExperimentReport {
    std::vector<std::string> row_names;   // vector sets
    std::vector<std::string> col_names;   // architectures
    std::vector<std::vector<double>> cells;  // accuracy percent, [row][col]
    std::size_t dataset_size = 0;
    std::size_t dropped_pairs = 0;

    // Accuracies render with two decimals in both outputs.
    void to_tsv(std::ostream& out) const {
        out << "vectors";
        for (const std::string& col : col_names) out << '\t' << col;
        out << "\n";
        char buf[32];
        for (std::size_t r = 0; r < row_names.size(); ++r) {
            out << row_names[r];
            for (double cell : cells[r]) {
                std::snprintf(buf, sizeof(buf), "%.2f", cell);
                out << '\t' << buf;
            }
            out << "\n";
        }
    }

    void render(std::ostream& out) const {
        std::size_t name_width = 7;
        for (const std::string& row : row_names) name_width = std::max(name_width, row.size());
        out << std::string(name_width, ' ');
        for (const std::string& col : col_names) {
            out << "  ";
            for (std::size_t i = col.size(); i < 10; ++i) out << ' ';
            out << col;
        }
        out << "\n";
        char buf[32];
        for (std::size_t r = 0; r < row_names.size(); ++r) {
            out << row_names[r] << std::string(name_width - row_names[r].size(), ' ');
            for (double cell : cells[r]) {
                std::snprintf(buf, sizeof(buf), "%10.2f", cell);
                out << "  " << buf;
            }
            out << "\n";
        }
    }
};

// Trains every (vector set, architecture) cell on one shared dataset:
// positives filtered for coverage by all vector sets jointly, negatives by
// seeded shuffling, one seeded split reused by every cell.  Cell training
// seeds derive from (seed, row, column), so the grid may be evaluated in any
// order, or in parallel, with identical results.
inline ExperimentReport run_experiment(const ExperimentSpec& spec, int threads = 1,
                                       std::ostream* log = nullptr) {
    spec.validate();
    Rng master(spec.seed);

    std::vector<EmbeddingStore> stores;
    stores.reserve(spec.vector_sets.size());
    for (const auto& [name, path] : spec.vector_sets) stores.push_back(EmbeddingStore::load_file(path));

    PairDataset positives = load_pairs_file(spec.pairs_path);
    for (const PairItem& item : positives.items)
        if (!item.match) throw DataError("experiment pairs file must contain positives only");

    std::size_t dropped = 0;
    {
        PairDataset covered;
        covered.provenance = positives.provenance;
        for (const PairItem& item : positives.items) {
            bool keep = true;
            for (const EmbeddingStore& store : stores)
                if (!store.contains(item.a) || !store.contains(item.b)) {
                    keep = false;
                    break;
                }
            if (keep)
                covered.items.push_back(item);
            else
                ++dropped;
        }
        positives = std::move(covered);
    }
    if (positives.items.size() < 2) throw DataError("too few covered positive pairs");
    if (log)
        *log << "experiment: " << positives.items.size() << " covered positives, " << dropped
             << " dropped\n";

    std::vector<PairItem> negatives =
        generate_negatives(positives.items, spec.negative_ratio, master.derive("negatives"));
    PairDataset full;
    full.provenance = positives.provenance;
    full.items = positives.items;
    full.items.insert(full.items.end(), negatives.begin(), negatives.end());

    SplitDataset splits = split_dataset(full, spec.split, master.derive("split"));
    if (splits.train.items.empty()) throw DataError("train split is empty");

    ExperimentReport report;
    report.dataset_size = full.items.size();
    report.dropped_pairs = dropped;
    for (const auto& [name, path] : spec.vector_sets) report.row_names.push_back(name);
    for (Arch arch : spec.archs) report.col_names.push_back(to_string(arch));
    report.cells.assign(report.row_names.size(),
                        std::vector<double>(report.col_names.size(), 0.0));

    struct Cell {
        std::size_t row;
        std::size_t col;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < report.row_names.size(); ++r)
        for (std::size_t c = 0; c < report.col_names.size(); ++c) cells.push_back({r, c});

    std::mutex log_guard;
    auto run_cell = [&](const Cell& cell) {
        const EmbeddingStore& store = stores[cell.row];
        ClassifierOptions options = spec.classifier;
        PairClassifier clf(spec.archs[cell.col], store.dim(), options.hidden, options.leak);
        Rng cell_rng = master.derive("cell", cell.row * report.col_names.size() + cell.col);
        clf.init(cell_rng.derive("classifier-init"));
        // train_classifier derives its shuffle stream from options.seed; feed
        // it a cell-specific value.
        options.seed = cell_rng.derive("classifier-train").next_u64();
        train_classifier(clf, splits.train, splits.dev, store, options);
        const double test_acc = evaluate(clf, splits.test, store).accuracy;
        report.cells[cell.row][cell.col] = 100.0 * test_acc;
        if (log) {
            std::lock_guard<std::mutex> lock(log_guard);
            *log << "cell " << report.row_names[cell.row] << " x " << report.col_names[cell.col]
                 << ": " << 100.0 * test_acc << "\n";
        }
    };

    if (threads <= 1 || cells.size() <= 1) {
        for (const Cell& cell : cells) run_cell(cell);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= cells.size()) break;
                run_cell(cells[i]);
            }
        };
        std::vector<std::thread> pool;
        const std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), cells.size());
        for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
        for (std::thread& th : pool) th.join();
    }
    return report;
}

}  // namespace structvec
