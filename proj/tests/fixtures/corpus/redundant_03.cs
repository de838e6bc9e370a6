using Xunit;

namespace Fixtures.Redundant
{
    public class DistinctOperandsTests
    {
        [Fact]
        public void ComparesTwoValues()
        {
            var box = new Box();
            var expected = box.Capacity;
            Assert.Equal(expected, box.Free);
        }
    }

    public class UnfoldedArithmeticTests
    {
        [Fact]
        public void ArithmeticIsNotFolded()
        {
            var two = Numbers.Two();
            Assert.Equal(1 + 1, two);
        }
    }

    public class VariableFlagTests
    {
        [Fact]
        public void ChecksComputedFlag()
        {
            var box = new Box();
            var open = box.Open();
            Assert.True(open);
        }
    }
}
