import json
from dataclasses import asdict, dataclass, field
from enum import StrEnum, auto


class CheckStatus(StrEnum):
    PASS = auto()
    FAIL = auto()


@dataclass
class CheckResult:
    suite: str
    key: str
    status: CheckStatus
    witness: str | None = None  # expressão não nula quando falha
    detail: str = ""

    @property
    def passed(self):
        return self.status == CheckStatus.PASS


@dataclass
class Report:
    title: str
    results: list[CheckResult] = field(default_factory=list)

    def add(
        self,
        suite: str,
        key: str,
        ok: bool,
        witness=None,
        detail: str = "",
    ) -> CheckResult:
        result = CheckResult(
            suite=suite,
            key=key,
            status=CheckStatus.PASS if ok else CheckStatus.FAIL,
            witness=None if ok or witness is None else str(witness),
            detail=detail,
        )
        self.results.append(result)
        return result

    def extend(self, other: "Report"):
        self.results.extend(other.results)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def summary(self) -> str:
        total = len(self.results)
        return f"{total - len(self.failures)}/{total} PASS"

    def to_text(self) -> str:
        lines = [self.title]
        for r in self.results:
            line = f"{r.status.upper():4} {r.suite} {r.key}"
            if r.detail:
                line += f" {r.detail}"
            if r.witness:
                line += f" :: {r.witness}"
            lines.append(line)
        lines.append(self.summary())
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "passed": self.passed,
            "results": [
                {**asdict(r), "status": r.status.upper()} for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def __repr__(self) -> str:
        return f"Report({self.title!r}, {len(self.results)} checks, passed={self.passed})"
