using Xunit;

namespace Fixtures.Magic
{
    public class AdderLiteralTests
    {
        [Fact]
        public void AddsSmallNumbers()
        {
            var adder = new Adder();
            var result = adder.Add(first, second);
            Assert.Equal(5, result);
        }

        private readonly int first = 2;
        private readonly int second = 3;
    }
}
