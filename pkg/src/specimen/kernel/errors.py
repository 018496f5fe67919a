from __future__ import annotations


class KernelError(Exception):
    pass


class IllTyped(KernelError):
    """Base class of every typing failure reported by ``type_of``."""


class UnboundVariable(IllTyped):
    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"unbound variable {name}" + (f": {detail}" if detail else ""))


class UnknownConstant(IllTyped):
    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"unknown constant {name}" + (f": {detail}" if detail else ""))


class IllFormedType(IllTyped):
    pass


class ApplicationMismatch(IllTyped):
    def __init__(self, expected, found, detail: str = ""):
        from .printing import format_type

        self.expected = expected
        self.found = found
        msg = f"argument has type {format_type(found)} but {format_type(expected)} was expected"
        super().__init__(msg + (f" ({detail})" if detail else ""))


class NotAFunction(IllTyped):
    def __init__(self, found):
        from .printing import format_type

        self.found = found
        super().__init__(f"cannot apply a term of type {format_type(found)}")


class SpecialisationOfNonPi(IllTyped):
    def __init__(self, found):
        from .printing import format_type

        self.found = found
        super().__init__(f"cannot specialise a term of type {format_type(found)} to a type")


class GeneralisationViolation(IllTyped):
    def __init__(self, type_var: str, variable: str):
        self.type_var = type_var
        self.variable = variable
        super().__init__(
            f"cannot generalise over {type_var}: free variable {variable} has a type mentioning it"
        )


class TypeMismatch(IllTyped):
    def __init__(self, expected, found, what: str = "term"):
        from .printing import format_type

        self.expected = expected
        self.found = found
        super().__init__(
            f"{what} has type {format_type(found)} but {format_type(expected)} was expected"
        )


class FuelExhausted(KernelError):
    def __init__(self, steps: int):
        self.steps = steps
        super().__init__(f"normalisation did not finish within {steps} steps")


class UnknownSort(IllFormedType):
    def __init__(self, name: str, detail: str = ""):
        self.name = name
        super().__init__(f"unknown sort {name}" + (f" {detail}" if detail else ""))
