"""Symbolic calculus of abstract open books.

Pages are handle inventories, monodromies are words in labeled twist
generators.  The sound moves are: cyclic rotation, conjugation, attaching a
page handle below the critical index with the word untouched, stabilization
(critical handle + one appended positive letter along the resulting sphere),
and its inverse.  Words reduce freely; no other relations are imposed, so
equivalence testing is three-valued (True / "unknown").

Descriptor text format (one item per line, inventories sorted by label):

    page <half_dim>
    handle <label> index <k> framing <tag>
    sphere <label> supports <h1,h2,...> [disk <label> tag <tag>]
    disk <label> tag <tag>
    word <label>^<+1|-1> <label>^<+1|-1> ...

The ``disk`` clause on a sphere records the Legendrian-boundary disk consumed
by the stabilization that created it (the sphere meets that handle's belt
sphere once), which is exactly what destabilization restores.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Literal, Optional, Union

Letter = tuple[str, int]


@dataclass(frozen=True)
class Handle:
    label: str
    index: int
    framing: str


@dataclass(frozen=True)
class DiskBoundary:
    label: str
    tag: str


@dataclass(frozen=True)
class LagrangianSphere:
    label: str
    supports: tuple[str, ...]
    from_disk: Optional[DiskBoundary] = None  # set iff created by stabilization


@dataclass(frozen=True)
class AbstractPage:
    half_dim: int = 2
    handles: tuple[Handle, ...] = ()
    spheres: tuple[LagrangianSphere, ...] = ()
    disks: tuple[DiskBoundary, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "handles",
                           tuple(sorted(self.handles, key=lambda h: h.label)))
        object.__setattr__(self, "spheres",
                           tuple(sorted(self.spheres, key=lambda s: s.label)))
        object.__setattr__(self, "disks",
                           tuple(sorted(self.disks, key=lambda d: d.label)))
        for group, name in ((self.handles, "handle"), (self.spheres, "sphere"),
                            (self.disks, "disk")):
            labels = [item.label for item in group]
            if len(labels) != len(set(labels)):
                raise ValueError(f"duplicate {name} labels: {labels}")
        handle_labels = {h.label for h in self.handles}
        for s in self.spheres:
            missing = set(s.supports) - handle_labels
            if missing:
                raise ValueError(f"sphere {s.label} references unknown handles {missing}")
            if s.from_disk is not None and len(s.supports) != 1:
                raise ValueError(f"stabilization sphere {s.label} must ride exactly "
                                 f"one handle, got {s.supports}")

    def sphere(self, label: str) -> LagrangianSphere:
        for s in self.spheres:
            if s.label == label:
                return s
        raise KeyError(f"no sphere labeled {label}")


@dataclass(frozen=True)
class OpenBookDesc:
    page: AbstractPage
    word: tuple[Letter, ...] = ()

    def __post_init__(self):
        sphere_labels = {s.label for s in self.page.spheres}
        for label, power in self.word:
            if label not in sphere_labels:
                raise ValueError(f"word letter {label} has no sphere on the page")
            if power not in (1, -1):
                raise ValueError(f"letter power must be +1 or -1, got {power}")


def reduce_word(word: Iterable[Letter]) -> tuple[Letter, ...]:
    """Cancel adjacent inverse pairs until stable (free reduction only)."""
    out: list[Letter] = []
    for letter in word:
        if out and out[-1][0] == letter[0] and out[-1][1] == -letter[1]:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def is_positive_word(word: Iterable[Letter]) -> bool:
    """All letters right-handed; whether a word is merely *equivalent* to a
    positive one is not decided by the move calculus."""
    return all(power == 1 for _, power in word)


# ---------------------------------------------------------------------------
# moves
# ---------------------------------------------------------------------------

def cyclic_rotate(desc: OpenBookDesc) -> OpenBookDesc:
    """Move the last letter to the front (an equivalence of open books)."""
    if not desc.word:
        return desc
    rotated = (desc.word[-1],) + desc.word[:-1]
    return OpenBookDesc(desc.page, reduce_word(rotated))


def cyclic_rotate_back(desc: OpenBookDesc) -> OpenBookDesc:
    """Move the first letter to the back; inverse of :func:`cyclic_rotate`."""
    if not desc.word:
        return desc
    rotated = desc.word[1:] + (desc.word[0],)
    return OpenBookDesc(desc.page, reduce_word(rotated))


def conjugate(desc: OpenBookDesc, by: str, power: int = 1) -> OpenBookDesc:
    """word -> c^-1 word c for the letter c = (by, power), freely reduced."""
    desc.page.sphere(by)
    if power not in (1, -1):
        raise ValueError("conjugating power must be +1 or -1")
    word = ((by, -power),) + desc.word + ((by, power),)
    return OpenBookDesc(desc.page, reduce_word(word))


def subcritical_attach(desc: OpenBookDesc, label: str, index: int,
                       framing: str = "std") -> OpenBookDesc:
    """Attach a page handle below the critical index; the monodromy extends
    as the identity, so the word is untouched.  The recorded framing carries
    the extra disk-plane factor of the ambient picture."""
    if index >= desc.page.half_dim:
        raise ValueError(f"subcritical attachment needs index < {desc.page.half_dim}")
    handle = Handle(label, index, f"{framing}+D2")
    page = replace(desc.page, handles=desc.page.handles + (handle,))
    return OpenBookDesc(page, desc.word)


def _stab_handle_label(disk_label: str) -> str:
    return f"h({disk_label})"


def _stab_sphere_label(disk_label: str) -> str:
    return f"S({disk_label})"


def stabilize(desc: OpenBookDesc, disk_label: str) -> OpenBookDesc:
    """Attach a critical handle along the disk boundary, register the sphere
    spanned by the disk and the core (it meets the new belt sphere once), and
    append one right-handed letter along it."""
    disk = None
    for d in desc.page.disks:
        if d.label == disk_label:
            disk = d
    if disk is None:
        raise KeyError(f"no Legendrian-boundary disk labeled {disk_label}")
    h_label = _stab_handle_label(disk_label)
    s_label = _stab_sphere_label(disk_label)
    handle = Handle(h_label, desc.page.half_dim, f"{disk.tag}+core")
    sphere = LagrangianSphere(s_label, (h_label,), from_disk=disk)
    page = replace(desc.page,
                   handles=desc.page.handles + (handle,),
                   spheres=desc.page.spheres + (sphere,),
                   disks=tuple(d for d in desc.page.disks if d.label != disk_label))
    return OpenBookDesc(page, desc.word + ((s_label, 1),))


def destabilize(desc: OpenBookDesc) -> Optional[OpenBookDesc]:
    """Undo a stabilization: the final letter must be a positive twist along
    a stabilization sphere whose handle nothing else references.  Returns
    None when the pattern is absent (never guesses)."""
    if not desc.word:
        return None
    label, power = desc.word[-1]
    if power != 1:
        return None
    sphere = desc.page.sphere(label)
    if sphere.from_disk is None:
        return None
    h_label = sphere.supports[0]
    for s in desc.page.spheres:
        if s.label != label and h_label in s.supports:
            return None
    if any(lbl == label for lbl, _ in desc.word[:-1]):
        return None
    page = replace(desc.page,
                   handles=tuple(h for h in desc.page.handles if h.label != h_label),
                   spheres=tuple(s for s in desc.page.spheres if s.label != label),
                   disks=desc.page.disks + (sphere.from_disk,))
    return OpenBookDesc(page, desc.word[:-1])


# ---------------------------------------------------------------------------
# serialization (canonical, round-trips exactly)
# ---------------------------------------------------------------------------

def to_text(desc: OpenBookDesc) -> str:
    lines = [f"page {desc.page.half_dim}"]
    for h in desc.page.handles:
        lines.append(f"handle {h.label} index {h.index} framing {h.framing}")
    for s in desc.page.spheres:
        supports = ",".join(s.supports)
        line = f"sphere {s.label} supports {supports}"
        if s.from_disk is not None:
            line += f" disk {s.from_disk.label} tag {s.from_disk.tag}"
        lines.append(line)
    for d in desc.page.disks:
        lines.append(f"disk {d.label} tag {d.tag}")
    word = " ".join(f"{lbl}^{pw:+d}" for lbl, pw in desc.word)
    lines.append(f"word {word}".rstrip())
    return "\n".join(lines) + "\n"


def from_text(text: str) -> OpenBookDesc:
    half_dim = 2
    handles: list[Handle] = []
    spheres: list[LagrangianSphere] = []
    disks: list[DiskBoundary] = []
    word: tuple[Letter, ...] = ()
    for raw in text.strip().splitlines():
        parts = raw.split()
        if not parts:
            continue
        kind = parts[0]
        if kind == "page":
            half_dim = int(parts[1])
        elif kind == "handle":
            if parts[2] != "index" or parts[4] != "framing":
                raise ValueError(f"malformed handle line: {raw}")
            handles.append(Handle(parts[1], int(parts[3]), parts[5]))
        elif kind == "sphere":
            if parts[2] != "supports":
                raise ValueError(f"malformed sphere line: {raw}")
            supports = tuple(parts[3].split(","))
            from_disk = None
            if len(parts) > 4:
                if parts[4] != "disk" or parts[6] != "tag":
                    raise ValueError(f"malformed sphere line: {raw}")
                from_disk = DiskBoundary(parts[5], parts[7])
            spheres.append(LagrangianSphere(parts[1], supports, from_disk))
        elif kind == "disk":
            if parts[2] != "tag":
                raise ValueError(f"malformed disk line: {raw}")
            disks.append(DiskBoundary(parts[1], parts[3]))
        elif kind == "word":
            letters = []
            for tok in parts[1:]:
                lbl, _, pw = tok.rpartition("^")
                letters.append((lbl, int(pw)))
            word = tuple(letters)
        else:
            raise ValueError(f"unknown descriptor line: {raw}")
    page = AbstractPage(half_dim, tuple(handles), tuple(spheres), tuple(disks))
    return OpenBookDesc(page, word)


# ---------------------------------------------------------------------------
# bounded equivalence search
# ---------------------------------------------------------------------------

def neighbors(desc: OpenBookDesc) -> list[OpenBookDesc]:
    # both rotation directions keep the search metric symmetric, which the
    # meet-in-the-middle strategy requires
    out = [cyclic_rotate(desc), cyclic_rotate_back(desc)]
    for s in desc.page.spheres:
        out.append(conjugate(desc, s.label, 1))
        out.append(conjugate(desc, s.label, -1))
    for d in desc.page.disks:
        out.append(stabilize(desc, d.label))
    undone = destabilize(desc)
    if undone is not None:
        out.append(undone)
    return out


def equivalent_up_to_moves(d1: OpenBookDesc, d2: OpenBookDesc, depth: int = 6,
                           max_nodes: int = 50000) -> Union[bool, Literal["unknown"]]:
    """Bidirectional breadth-first search over the sound moves.

    Returns True when a move chain of length <= depth connects the
    descriptors, and "unknown" when the bound (or the node budget) is
    exhausted -- never False, since the move calculus is not known to be
    complete."""
    k1, k2 = to_text(d1), to_text(d2)
    if k1 == k2:
        return True
    # every move is invertible, so meet-in-the-middle search is sound
    front = {k1: d1}
    back = {k2: d2}
    seen_front = {k1}
    seen_back = {k2}
    steps_front = (depth + 1) // 2
    steps_back = depth // 2
    nodes = 0
    for level in range(max(steps_front, steps_back)):
        for side in ("front", "back"):
            if side == "front" and level >= steps_front:
                continue
            if side == "back" and level >= steps_back:
                continue
            frontier = front if side == "front" else back
            seen = seen_front if side == "front" else seen_back
            other_seen = seen_back if side == "front" else seen_front
            new: dict[str, OpenBookDesc] = {}
            for desc in frontier.values():
                for nb in neighbors(desc):
                    key = to_text(nb)
                    if key in other_seen:
                        return True
                    if key not in seen:
                        seen.add(key)
                        new[key] = nb
                        nodes += 1
                        if nodes > max_nodes:
                            return "unknown"
            if side == "front":
                front = new
            else:
                back = new
    return "unknown"
