using System;
using Xunit;

namespace Fixtures.Print
{
    public class ConsoleDumpTests
    {
        [Fact]
        public void PrintsResultWhileChecking()
        {
            var formatter = new Formatter();
            var text = formatter.Format(value);
            Console.WriteLine(text);
            Assert.NotNull(text);
        }

        private readonly double value = 2.5;
    }
}
