// Copyright (C) 2026 The symedit Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>

#include "symedit/common/error.hpp"
#include "symedit/dsl/selector.hpp"

namespace symedit::dsl {

namespace {

constexpr std::array<std::string_view, 6> kStopwords = {"the", "a", "an", "most", "on", "of"};

bool is_stopword(std::string_view word) {
    return std::find(kStopwords.begin(), kStopwords.end(), word) != kStopwords.end();
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '#';
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (is_word_char(c)) {
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

}  // namespace

std::string_view to_string(Positional positional) noexcept {
    switch (positional) {
        case Positional::All: return "all";
        case Positional::Left: return "left";
        case Positional::Right: return "right";
        case Positional::Middle: return "middle";
        case Positional::FarLeft: return "far-left";
        case Positional::FarRight: return "far-right";
        case Positional::Index: return "index";
    }
    return "all";
}

Selector parse_selector(std::string_view text) {
    std::vector<std::string> raw = tokenize(text);
    if (raw.empty()) throw Error(ErrorCode::EmptySelector, "selector has no words");

    std::vector<std::string> words;
    std::copy_if(raw.begin(), raw.end(), std::back_inserter(words),
                 [](const std::string& w) { return !is_stopword(w); });
    if (words.empty()) words.push_back(raw.back());

    Selector sel;
    sel.class_name = words.back();
    words.pop_back();

    for (size_t i = 0; i < words.size(); ++i) {
        const std::string& w = words[i];
        if (w == "far" && i + 1 < words.size() && (words[i + 1] == "left" || words[i + 1] == "right")) {
            sel.positional = words[i + 1] == "left" ? Positional::FarLeft : Positional::FarRight;
            ++i;
        } else if (w == "far-left") {
            sel.positional = Positional::FarLeft;
        } else if (w == "far-right") {
            sel.positional = Positional::FarRight;
        } else if (w == "left") {
            sel.positional = Positional::Left;
        } else if (w == "right") {
            sel.positional = Positional::Right;
        } else if (w == "middle" || w == "center" || w == "centre") {
            sel.positional = Positional::Middle;
        } else if (w == "all") {
            sel.positional = Positional::All;
        } else if (w.front() == '#') {
            int k = -1;
            auto [ptr, ec] = std::from_chars(w.data() + 1, w.data() + w.size(), k);
            if (ec != std::errc{} || ptr != w.data() + w.size() || w.size() < 2 || k < 0) {
                throw Error(ErrorCode::SyntaxError, "malformed index token '" + w + "'");
            }
            sel.positional = Positional::Index;
            sel.index = k;
        } else {
            sel.attributes.push_back(w);
        }
    }
    return sel;
}

std::string print_selector(const Selector& selector) {
    std::string out;
    auto append = [&out](std::string_view word) {
        if (!out.empty()) out.push_back(' ');
        out.append(word);
    };
    switch (selector.positional) {
        case Positional::All: break;
        case Positional::Left: append("left"); break;
        case Positional::Right: append("right"); break;
        case Positional::Middle: append("middle"); break;
        case Positional::FarLeft: append("far left"); break;
        case Positional::FarRight: append("far right"); break;
        case Positional::Index: append("#" + std::to_string(selector.index)); break;
    }
    for (const auto& attr : selector.attributes) append(attr);
    append(selector.class_name);
    return out;
}

}  // namespace symedit::dsl
