from typing import List, TextIO, Tuple

import color

RGB = Tuple[int, int, int]


class LogLine:
    def __init__(self, text: str, fg: RGB):
        self.text = text
        self.fg = fg
        self.count = 1

    @property
    def full_text(self) -> str:
        return self.text if self.count == 1 else f"{self.text} (x{self.count})"


class MessageLog:
    """Verdicts and errors of a run, written to stderr once the command finishes.

    A message equal to the previous one bumps its count instead of adding a line.
    """

    def __init__(self) -> None:
        self.messages: List[LogLine] = []

    def add_message(self, text: str, fg: RGB = color.info) -> None:
        if self.messages and self.messages[-1].text == text:
            self.messages[-1].count += 1
        else:
            self.messages.append(LogLine(text, fg))

    def render(self, stream: TextIO) -> None:
        colored = stream.isatty()
        for line in self.messages:
            text = line.full_text
            if colored:
                text = "\x1b[38;2;{};{};{}m{}\x1b[0m".format(*line.fg, text)
            stream.write(text + "\n")
