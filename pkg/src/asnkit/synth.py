"""Deterministic synthetic treebank generators.

These produce small, fully scripted corpora that exercise the pipeline
end-to-end: a modal-verb takeover where one head replaces another while
rank and frequency dissociate, a cross-linking corpus whose later slices
share lemmas across sentences, and a richer combined demo corpus that ships
with the package.  Everything is pure string construction; no randomness.
"""

from __future__ import annotations

from typing import Sequence

__all__ = ["takeover_corpus", "crosslink_corpus", "demo_corpus"]


def _sentence(rows: Sequence[tuple[str, str, str, int]]) -> str:
    """Render token rows (surface, lemma, role, head) with computed rules."""
    lines = []
    for idx, (surface, lemma, role, head) in enumerate(rows, start=1):
        lines.append(f"{idx}\t{surface}\t{lemma}\t{role}\t{head}\t_")
    return "\n".join(lines)


# Small pools cycled with ``i % len(pool)``.  Every century's dominant modal
# has at least ``len(pool)`` sentences, so the subject and infinitive
# vocabulary is identical in every slice — the only lexical change across a
# takeover series is the modal itself.
_SUBJECT_NOUNS = ("man", "vrouwe", "kint", "herre")

_INFINITIVES = ("geben", "komen", "nemen", "riten")

#: Modal-verb sentence counts per slice position: the old modal fades while
#: the new one arrives two slices in.
_OLD_MODAL_COUNTS = (12, 10, 4, 2)
_NEW_MODAL_COUNTS = (0, 0, 8, 10)


def _cycled(i: int) -> tuple[str, str]:
    """Subject and infinitive for the i-th modal sentence of a slice."""
    return (
        _SUBJECT_NOUNS[i % len(_SUBJECT_NOUNS)],
        _INFINITIVES[i % len(_INFINITIVES)],
    )


def _modal_sentence(modal: str, noun: str, infinitive: str) -> str:
    return _sentence(
        [
            (noun, noun, "N", 2),
            (modal, modal, "MV", 0),
            (infinitive, infinitive, "IV", 2),
        ]
    )


def _auxiliary_sentences() -> list[str]:
    """Stable passive/auxiliary sentences rooted at the auxiliary."""
    participles = ("geborn", "genant", "gesehen", "gelobt", "gevraget", "gehoeret")
    pronouns = ("er", "si", "ez", "er", "si", "ez")
    out = []
    for pron, part in zip(pronouns, participles):
        out.append(
            _sentence(
                [
                    (pron, pron, "PP", 2),
                    ("wirt", "werden", "AX", 0),
                    (part, part, "PCPS", 2),
                ]
            )
        )
    return out


def _full_verb_sentences() -> list[str]:
    """Stable sentences rooted at a full verb, with articles under nouns."""
    out = []
    for subj, obj in (("man", "kint"), ("herre", "bote")):
        out.append(
            _sentence(
                [
                    ("der", "der", "AR", 2),
                    (subj, subj, "N", 3),
                    ("sihet", "sehen", "V", 0),
                    ("daz", "daz", "AR", 5),
                    (obj, obj, "N", 3),
                ]
            )
        )
    return out


def takeover_corpus(
    centuries: Sequence[int] = (14, 15, 16, 17),
    old_modal: str = "mogen",
    new_modal: str = "konnen",
) -> str:
    """Corpus where one modal verb takes over headship from another.

    Every century shares an identical stable core (auxiliary and full-verb
    sentences).  The old modal heads fewer and fewer sentences while staying
    a head; the new modal is absent from the first two slices and arrives in
    force at the third.  Rank and frequency therefore dissociate: the old
    modal's frequency collapses long before its rank leaves the top band.
    """
    if len(centuries) != len(_OLD_MODAL_COUNTS):
        raise ValueError(
            f"takeover corpus is scripted for {len(_OLD_MODAL_COUNTS)} slices"
        )
    blocks: list[str] = []
    for pos, century in enumerate(centuries):
        blocks.append(f"# century = {century}\n# doc_id = takeover{century}")
        sentences = list(_auxiliary_sentences())
        sentences += _full_verb_sentences()
        for i in range(_OLD_MODAL_COUNTS[pos]):
            sentences.append(_modal_sentence(old_modal, *_cycled(i)))
        for i in range(_NEW_MODAL_COUNTS[pos]):
            sentences.append(_modal_sentence(new_modal, *_cycled(i)))
        blocks.append("\n\n".join(sentences))
    return "\n\n".join(blocks) + "\n"


def crosslink_corpus(
    centuries: Sequence[int] = (14, 15, 16, 17),
    link_from: int = 16,
    chains: int = 5,
    depth: int = 4,
) -> str:
    """Chain sentences that start sharing lemmas at ``link_from``.

    Before ``link_from`` every sentence is a chain over its own vocabulary,
    so network diameter equals the maximum tree depth.  From ``link_from``
    onward each chain's leaf reuses the next chain's root lemma, welding the
    chains into one long path whose diameter far exceeds any tree depth.
    """
    blocks: list[str] = []
    for century in centuries:
        blocks.append(f"# century = {century}\n# doc_id = chains{century}")
        sentences = []
        for c in range(chains):
            rows = []
            for j in range(depth + 1):
                lemma = f"k{c}w{j}"
                if century >= link_from and j == depth and c < chains - 1:
                    lemma = f"k{c + 1}w0"
                rows.append((lemma, lemma, "N", j))
            sentences.append(_sentence(rows))
        blocks.append("\n\n".join(sentences))
    return "\n\n".join(blocks) + "\n"


def _missing_sentences() -> list[str]:
    """Target sentences with missing annotations, one adjacent, one not."""
    adjacent = _sentence(
        [
            ("unbekannt", "unbekannt", "_", 2),
            ("wirt", "werden", "AX", 0),
            ("genant", "genant", "PCPS", 2),
        ]
    )
    distant = _sentence(
        [
            ("er", "er", "PP", 2),
            ("wirt", "werden", "AX", 0),
            ("gelobt", "gelobt", "PCPS", 2),
            ("!", "!", "_", 3),
        ]
    )
    return [adjacent, distant]


def _bulk_sentences(century: int) -> list[str]:
    """Verb-rooted sentences that give each slice a spread of degrees."""
    nouns = [f"dinc{i}" for i in range(10)]
    out = []
    rooted = ("geben", "nemen", "bringen")
    for i in range(9):
        verb = rooted[i % 3]
        a = nouns[i]
        b = nouns[(i + 1) % 10]
        rows = [
            ("der", "der", "AR", 2),
            (a, a, "N", 3),
            (verb, verb, "V", 0),
            (b, b, "N", 3),
        ]
        # Later centuries add a prepositional extension, growing both the
        # vocabulary reach and the typical path length.
        if century >= 16:
            c = nouns[(i + 2) % 10]
            rows.append(("von", "von", "PR", 3))
            rows.append((c, c, "N", 5))
        out.append(_sentence(rows))
    return out


def demo_corpus(centuries: Sequence[int] = (14, 15, 16, 17)) -> str:
    """The bundled demonstration corpus: takeover plus bulk plus missing.

    Sentences carry the target lemma ``werden`` metadata so the default
    missing-annotation policy has something to judge adjacency against.
    """
    blocks: list[str] = []
    for pos, century in enumerate(centuries):
        blocks.append(
            f"# century = {century}\n"
            f"# doc_id = demo{century}\n"
            f"# dialect = obd\n"
            f"# target = werden"
        )
        sentences = list(_auxiliary_sentences())
        sentences += _full_verb_sentences()
        for i in range(_OLD_MODAL_COUNTS[pos]):
            sentences.append(_modal_sentence("mogen", *_cycled(i)))
        for i in range(_NEW_MODAL_COUNTS[pos]):
            sentences.append(_modal_sentence("konnen", *_cycled(i)))
        sentences += _bulk_sentences(century)
        sentences += _missing_sentences()
        blocks.append("\n\n".join(sentences))
    return "\n\n".join(blocks) + "\n"


if __name__ == "__main__":  # pragma: no cover
    import sys

    sys.stdout.write(demo_corpus())
