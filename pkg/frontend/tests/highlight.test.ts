import { describe, expect, it } from "vitest";
import { parseSnippet, renderSnippet } from "../src/highlight";

describe("parseSnippet", () => {
    it("splits marked terms out of the surrounding text", () => {
        expect(parseSnippet("the «wat» on the hill")).toEqual([
            { text: "the ", marked: false },
            { text: "wat", marked: true },
            { text: " on the hill", marked: false },
        ]);
    });

    it("handles adjacent and leading markers", () => {
        expect(parseSnippet("«a»«b» c")).toEqual([
            { text: "a", marked: true },
            { text: "b", marked: true },
            { text: " c", marked: false },
        ]);
    });

    it("passes through text without markers", () => {
        expect(parseSnippet("plain text")).toEqual([{ text: "plain text", marked: false }]);
    });

    it("keeps Khmer marked terms intact", () => {
        const parts = parseSnippet("ទៅ«វត្តភ្នំ»នៅ");
        expect(parts[1]).toEqual({ text: "វត្តភ្នំ", marked: true });
    });
});

describe("renderSnippet", () => {
    it("renders marked parts as <mark> elements in order", () => {
        const fragment = renderSnippet(document, "see «wat» and «pagoda»");
        const host = document.createElement("div");
        host.appendChild(fragment);
        const marks = [...host.querySelectorAll("mark")].map((m) => m.textContent);
        expect(marks).toEqual(["wat", "pagoda"]);
        expect(host.textContent).toBe("see wat and pagoda");
        expect(host.innerHTML).toContain("<mark>wat</mark>");
    });

    it("never injects markup from the snippet text", () => {
        const fragment = renderSnippet(document, "x «<b>bold</b>» y");
        const host = document.createElement("div");
        host.appendChild(fragment);
        expect(host.querySelector("b")).toBeNull();
        expect(host.querySelector("mark")?.textContent).toBe("<b>bold</b>");
    });
});
