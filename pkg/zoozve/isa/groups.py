from typing import Optional

from ..errors import CapacityError
from ..schemas import RegisterGroup


def group_size(elem_count: int, vew_bits: int, vlen_bits: int) -> int:
    """Registers needed for elem_count elements: ceil(L * VEW / VLEN)."""
    return -(-elem_count * vew_bits // vlen_bits)


def compute_group(head: int, elem_count: int, vew_bits: int, vlen_bits: int,
                  num_vregs: Optional[int] = None) -> RegisterGroup:
    if head < 0:
        raise ValueError(f"head must be non-negative, got {head}")
    if elem_count < 1:
        raise ValueError(f"elem_count must be at least 1, got {elem_count}")
    if vlen_bits % vew_bits:
        raise ValueError(f"vew_bits={vew_bits} does not divide vlen_bits={vlen_bits}")

    size = group_size(elem_count, vew_bits, vlen_bits)
    if num_vregs is not None and head + size > num_vregs:
        raise CapacityError(head, size, num_vregs)
    return RegisterGroup(head=head, tail=head + size)
