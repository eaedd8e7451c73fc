"""Title and main-content extraction from article HTML.

The title comes from the first <title> element, falling back to the first
<h1>. The body is the text of <p> and <article> elements with markup
stripped and whitespace collapsed; <script> and <style> content never leaks
into the output.
"""

from __future__ import annotations

import re
from html.parser import HTMLParser

from .errors import KseError


class ExtractionError(KseError):
    """Page has no usable title or no extractable body text."""


_SKIP_TAGS = {"script", "style", "noscript"}
_CONTENT_TAGS = {"p", "article"}


class _ArticleParser(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.title_parts: list[str] = []
        self.h1_parts: list[str] = []
        self.body_parts: list[str] = []
        self._in_title = False
        self._in_h1 = False
        self._title_done = False
        self._h1_done = False
        self._content_depth = 0
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag == "title" and not self._title_done:
            self._in_title = True
        elif tag == "h1" and not self._h1_done:
            self._in_h1 = True
        elif tag in _CONTENT_TAGS:
            self._content_depth += 1
            self.body_parts.append(" ")

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS:
            self._skip_depth = max(0, self._skip_depth - 1)
        elif tag == "title" and self._in_title:
            self._in_title = False
            self._title_done = True
        elif tag == "h1" and self._in_h1:
            self._in_h1 = False
            self._h1_done = True
        elif tag in _CONTENT_TAGS:
            self._content_depth = max(0, self._content_depth - 1)
            self.body_parts.append(" ")

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title:
            self.title_parts.append(data)
        if self._in_h1:
            self.h1_parts.append(data)
        if self._content_depth:
            self.body_parts.append(data)


def _collapse(text: str) -> str:
    return re.sub(r"\s+", " ", text).strip()


def extract_title_body(html: str) -> tuple[str, str]:
    """Split article HTML into (title, body). Pure on the HTML string.

    Raises ExtractionError when neither <title> nor <h1> is present, or when
    no paragraph text can be extracted.
    """
    parser = _ArticleParser()
    parser.feed(html)
    parser.close()
    title = _collapse("".join(parser.title_parts)) or _collapse("".join(parser.h1_parts))
    if not title:
        raise ExtractionError("page has no <title> or <h1> element")
    body = _collapse("".join(parser.body_parts))
    if not body:
        raise ExtractionError("no body text found in <p> or <article> elements")
    return title, body
