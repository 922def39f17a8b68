#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "structvec/conll.hpp"
#include "structvec/errors.hpp"
#include "structvec/vocab.hpp"

namespace structvec {

enum class ArcSide { Head, Tail };
enum class PatternKind { SuchAs, KnownAs, NameFor };
enum class PatternSide { X, Y };
enum class SubjObjRole { Subject, Object };

// A discrete context item derived from a dependency tree.  Four families:
//   Arc       - first-order arc (label, side of the arc, adjoined word)
//   FlatPrep  - flattened prepositional phrase linking head and object
//   Pattern   - noun-relationship template (such_as / known_as / name_for)
//   SubjObj   - subject<->object link through a transitive verb
struct StructuralFeature {
    enum class Kind { Arc, FlatPrep, Pattern, SubjObj };

    Kind kind;
    std::string tag;    // arc label, preposition, pattern name, or verb
    char side;          // 'H'/'T' for arcs, 'X'/'Y' for patterns, 'S'/'O' for subj-obj
    std::string other;  // the word on the far side of the relation

    static StructuralFeature arc(std::string label, ArcSide s, std::string adjoined) {
        return {Kind::Arc, std::move(label), s == ArcSide::Head ? 'H' : 'T', std::move(adjoined)};
    }
    static StructuralFeature flat_prep(std::string prep, ArcSide s, std::string adjoined) {
        return {Kind::FlatPrep, std::move(prep), s == ArcSide::Head ? 'H' : 'T', std::move(adjoined)};
    }
    static StructuralFeature pattern(PatternKind k, PatternSide s, std::string other_word) {
        const char* name = k == PatternKind::SuchAs ? "such_as"
                           : k == PatternKind::KnownAs ? "known_as"
                                                       : "name_for";
        return {Kind::Pattern, name, s == PatternSide::X ? 'X' : 'Y', std::move(other_word)};
    }
    static StructuralFeature subj_obj(SubjObjRole r, std::string verb, std::string other_word) {
        return {Kind::SubjObj, std::move(verb), r == SubjObjRole::Subject ? 'S' : 'O',
                std::move(other_word)};
    }

    // Canonical string form, used in feature vocabulary files and pair dumps:
    //   dep:<label>:<H|T>:<adjoined>
    //   prepf:<prep>:<H|T>:<adjoined>
    //   pat:<such_as|known_as|name_for>:<X|Y>:<other>
    //   so:<subj|obj>:<verb>:<other>
    // Field values have ':' and '\' escaped so the encoding stays injective
    // even for labels like "nsubj:pass".
    std::string encode() const {
        std::string out;
        switch (kind) {
            case Kind::Arc:
                out = "dep:";
                append_escaped(out, tag);
                out += side == 'H' ? ":H:" : ":T:";
                append_escaped(out, other);
                break;
            case Kind::FlatPrep:
                out = "prepf:";
                append_escaped(out, tag);
                out += side == 'H' ? ":H:" : ":T:";
                append_escaped(out, other);
                break;
            case Kind::Pattern:
                out = "pat:" + tag;
                out += side == 'X' ? ":X:" : ":Y:";
                append_escaped(out, other);
                break;
            case Kind::SubjObj:
                out = side == 'S' ? "so:subj:" : "so:obj:";
                append_escaped(out, tag);
                out += ':';
                append_escaped(out, other);
                break;
        }
        return out;
    }

    bool operator==(const StructuralFeature& rhs) const = default;

private:
    static void append_escaped(std::string& out, std::string_view field) {
        for (char ch : field) {
            if (ch == ':' || ch == '\\') out += '\\';
            out += ch;
        }
    }
};

struct FeaturePair {
    std::string word;
    StructuralFeature feature;

    bool operator==(const FeaturePair& rhs) const = default;
};

// The multiset of (word, feature) pairs extracted from a corpus.  Duplicates
// are kept: each occurrence is one training event.
struct FeaturePairSet {
    std::vector<FeaturePair> pairs;

    std::int64_t size() const { return static_cast<std::int64_t>(pairs.size()); }
};

// Dependency label names used by the extractors.  Defaults are Stanford
// dependencies; remap for corpora with different label inventories.
struct ExtractConfig {
    bool arc = true;
    bool flat_prep = true;
    bool pattern = true;
    bool subj_obj = true;

    std::string prep_label = "prep";
    std::string pobj_label = "pobj";
    std::string mwe_label = "mwe";
    std::string nsubj_label = "nsubj";
    std::string nsubjpass_label = "nsubjpass";
    std::string dobj_label = "dobj";

    bool any_family() const { return arc || flat_prep || pattern || subj_obj; }
};

// For every non-root arc label(head, dependent): the head gets a head-side
// feature naming the dependent, the dependent gets a tail-side feature
// naming the head.
inline std::vector<FeaturePair> extract_arc_features(const ParsedSentence& sentence) {
    std::vector<FeaturePair> out;
    const int n = static_cast<int>(sentence.size());
    for (int dep = 1; dep <= n; ++dep) {
        const Token& tok = sentence.at1(dep);
        if (tok.head == 0) continue;
        const std::string& head_word = sentence.word1(tok.head);
        out.push_back({head_word, StructuralFeature::arc(tok.arc_label, ArcSide::Head, tok.surface)});
        out.push_back({tok.surface, StructuralFeature::arc(tok.arc_label, ArcSide::Tail, head_word)});
    }
    return out;
}

// prep(h, p) and pobj(p, o) link h and o directly, labeled by the
// preposition itself.
inline std::vector<FeaturePair> extract_flat_prep_features(const ParsedSentence& sentence,
                                                           const ExtractConfig& config = {}) {
    std::vector<FeaturePair> out;
    const int n = static_cast<int>(sentence.size());
    for (int p = 1; p <= n; ++p) {
        const Token& prep_tok = sentence.at1(p);
        if (prep_tok.head == 0 || prep_tok.arc_label != config.prep_label) continue;
        const std::string& head_word = sentence.word1(prep_tok.head);
        for (int o = 1; o <= n; ++o) {
            const Token& obj_tok = sentence.at1(o);
            if (obj_tok.head != p || obj_tok.arc_label != config.pobj_label) continue;
            out.push_back({head_word,
                           StructuralFeature::flat_prep(prep_tok.surface, ArcSide::Head, obj_tok.surface)});
            out.push_back({obj_tok.surface,
                           StructuralFeature::flat_prep(prep_tok.surface, ArcSide::Tail, head_word)});
        }
    }
    return out;
}

namespace detail {

// Children of `head` attached with `label`, in sentence order (1-based).
inline std::vector<int> children_with_label(const ParsedSentence& sentence, int head,
                                            const std::string& label) {
    std::vector<int> out;
    for (int i = 1; i <= static_cast<int>(sentence.size()); ++i) {
        const Token& tok = sentence.at1(i);
        if (tok.head == head && tok.arc_label == label) out.push_back(i);
    }
    return out;
}

inline bool has_child_with_label_and_form(const ParsedSentence& sentence, int head,
                                          const std::string& label, std::string_view form) {
    for (int i = 1; i <= static_cast<int>(sentence.size()); ++i) {
        const Token& tok = sentence.at1(i);
        if (tok.head == head && tok.arc_label == label && tok.surface == form) return true;
    }
    return false;
}

}  // namespace detail

// Noun-relationship templates.  Lexical anchors match lowercased surface
// forms; every instantiation of a template over token positions fires once.
//
//   such_as : mwe(as_i, such) & prep(X, as_i) & pobj(as_i, Y)
//   known_as: prep(known_i, as_j) & nsubjpass(known_i, X) & pobj(as_j, Y)
//   name_for: nsubj(X, name_i) & prep(name_i, for_j) & pobj(for_j, Y)
//
// X receives a feature naming Y and vice versa.
inline std::vector<FeaturePair> extract_pattern_features(const ParsedSentence& sentence,
                                                         const ExtractConfig& config = {}) {
    std::vector<FeaturePair> out;
    const int n = static_cast<int>(sentence.size());

    auto emit = [&out](PatternKind kind, const std::string& x_word, const std::string& y_word) {
        out.push_back({x_word, StructuralFeature::pattern(kind, PatternSide::X, y_word)});
        out.push_back({y_word, StructuralFeature::pattern(kind, PatternSide::Y, x_word)});
    };

    for (int i = 1; i <= n; ++i) {
        const Token& tok = sentence.at1(i);

        // such_as: `tok` is the "as" token, attached to X by prep.
        if (tok.surface == "as" && tok.head != 0 && tok.arc_label == config.prep_label &&
            detail::has_child_with_label_and_form(sentence, i, config.mwe_label, "such")) {
            for (int y : detail::children_with_label(sentence, i, config.pobj_label))
                emit(PatternKind::SuchAs, sentence.word1(tok.head), sentence.word1(y));
        }

        // known_as: `tok` is the "known" token.
        if (tok.surface == "known") {
            for (int as_j : detail::children_with_label(sentence, i, config.prep_label)) {
                if (sentence.word1(as_j) != "as") continue;
                for (int x : detail::children_with_label(sentence, i, config.nsubjpass_label))
                    for (int y : detail::children_with_label(sentence, as_j, config.pobj_label))
                        emit(PatternKind::KnownAs, sentence.word1(x), sentence.word1(y));
            }
        }

        // name_for: `tok` is the "name" token, attached to X by nsubj.
        if (tok.surface == "name" && tok.head != 0 && tok.arc_label == config.nsubj_label) {
            for (int for_j : detail::children_with_label(sentence, i, config.prep_label)) {
                if (sentence.word1(for_j) != "for") continue;
                for (int y : detail::children_with_label(sentence, for_j, config.pobj_label))
                    emit(PatternKind::NameFor, sentence.word1(tok.head), sentence.word1(y));
            }
        }
    }
    return out;
}

// For every verb with both nsubj and dobj dependents, link each subject to
// each object through the verb.
inline std::vector<FeaturePair> extract_subjobj_features(const ParsedSentence& sentence,
                                                         const ExtractConfig& config = {}) {
    std::vector<FeaturePair> out;
    const int n = static_cast<int>(sentence.size());
    for (int v = 1; v <= n; ++v) {
        std::vector<int> subjects = detail::children_with_label(sentence, v, config.nsubj_label);
        if (subjects.empty()) continue;
        std::vector<int> objects = detail::children_with_label(sentence, v, config.dobj_label);
        if (objects.empty()) continue;
        const std::string& verb = sentence.word1(v);
        for (int s : subjects) {
            for (int o : objects) {
                out.push_back({sentence.word1(s),
                               StructuralFeature::subj_obj(SubjObjRole::Subject, verb, sentence.word1(o))});
                out.push_back({sentence.word1(o),
                               StructuralFeature::subj_obj(SubjObjRole::Object, verb, sentence.word1(s))});
            }
        }
    }
    return out;
}

// Runs the enabled extractor families over the corpus, in corpus order, and
// drops pairs whose keyed word or far-side word is out of vocabulary.
inline FeaturePairSet extract_all(const std::vector<ParsedSentence>& sentences,
                                  const ExtractConfig& config, const Vocabulary& vocab) {
    if (!config.any_family()) throw ConfigError("no feature family selected");
    FeaturePairSet set;
    auto keep = [&vocab](const FeaturePair& pair) {
        return vocab.contains(pair.word) && vocab.contains(pair.feature.other);
    };
    auto append = [&set, &keep](std::vector<FeaturePair>&& pairs) {
        for (FeaturePair& pair : pairs)
            if (keep(pair)) set.pairs.push_back(std::move(pair));
    };
    for (const ParsedSentence& sentence : sentences) {
        if (config.arc) append(extract_arc_features(sentence));
        if (config.flat_prep) append(extract_flat_prep_features(sentence, config));
        if (config.pattern) append(extract_pattern_features(sentence, config));
        if (config.subj_obj) append(extract_subjobj_features(sentence, config));
    }
    return set;
}

// Vocabulary over canonical feature strings, with the same ordering and
// filtering rules as the word vocabulary.
inline Vocabulary build_feature_vocabulary(const FeaturePairSet& set, std::int64_t min_count) {
    std::unordered_map<std::string, std::int64_t> counts;
    for (const FeaturePair& pair : set.pairs) ++counts[pair.feature.encode()];
    return Vocabulary::from_counts(counts, min_count);
}

}  // namespace structvec
