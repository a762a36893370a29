#pragma once

#include <string>
#include <string_view>

namespace darkcorpus {

struct ExtractedText {
    std::string title;
    std::string body;
};

// Pulls the title and the visible body text out of an HTML document.
//
// Script and style content, comments, doctypes and processing instructions
// are excluded. Every tag is replaced by one space. HTML entities naming
// characters in U+0000..U+00FF are decoded; entities above that range stay
// as written. If the document has no <body> element the whole document's
// visible text (minus the title element) is used instead, so arbitrarily
// broken markup degrades to tag stripping and never to a failure.
ExtractedText extract_text(std::string_view html);

// Decodes one entity starting at the '&' at html[pos]. On success appends
// the character to out and returns the position after the entity; otherwise
// returns pos. Exposed for the ingest warning path and for tests.
std::size_t decode_entity(std::string_view html, std::size_t pos, std::string& out);

}  // namespace darkcorpus
